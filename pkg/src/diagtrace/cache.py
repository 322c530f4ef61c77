"""On-disk chain cache: one JSON file per (k, format version)."""

from __future__ import annotations

import json
import os
from pathlib import Path

from .forge import ChainResult
from .symfun import FORMAT_VERSION, identity_from_dict


def cache_path(cache_dir: str | os.PathLike, k: int) -> Path:
    return Path(cache_dir) / f"chain-k{k}-v{FORMAT_VERSION}.json"


def chain_to_dict(chain: ChainResult) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "arity": chain.arity,
        "mixed": chain.mixed.to_dict(),
        "pure": chain.pure.to_dict(),
    }


def chain_from_dict(data: dict) -> ChainResult:
    if data.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported cache format {data.get('format_version')}")
    mixed = identity_from_dict(data["mixed"])
    pure = identity_from_dict(data["pure"])
    if mixed.kind != "mixed" or pure.kind != "pure":
        raise ValueError("cache entry has the wrong identity kinds")
    return ChainResult(int(data["arity"]), mixed, pure)


def save_chain(chain: ChainResult, cache_dir: str | os.PathLike) -> Path:
    path = cache_path(cache_dir, chain.arity)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(chain_to_dict(chain), indent=1) + "\n")
    tmp.replace(path)
    return path


def load_chain(cache_dir: str | os.PathLike, k: int) -> ChainResult | None:
    path = cache_path(cache_dir, k)
    if not path.exists():
        return None
    return chain_from_dict(json.loads(path.read_text()))
