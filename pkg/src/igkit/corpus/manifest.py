"""Per-corpus manifest (``igkit.toml``).

Recognised top-level keys::

    name = "organic-rules"
    profile = "IG Core+C_Ext"
    taxonomies = ["local-taxonomy.json"]
    documents = ["rules.ig"]
    notes = "free text"

Relative paths resolve against the manifest's directory.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from ..errors import ManifestError, ProfileError
from ..profiles import Profile, parse_profile

_KEYS = {"name", "profile", "taxonomies", "documents", "notes"}


@dataclass(frozen=True)
class CorpusManifest:
    name: str
    documents: tuple[Path, ...]
    profile: Optional[Profile] = None
    taxonomies: tuple[Path, ...] = ()
    notes: str = ""
    path: Optional[Path] = None


def _paths(data: dict, key: str, base: Path) -> tuple[Path, ...]:
    value = data.get(key, [])
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ManifestError(f"{key!r} must be a list of paths")
    paths = tuple((base / v).resolve() for v in value)
    for p in paths:
        if not p.exists():
            raise ManifestError(f"{key} entry not found: {p}")
    return paths


def load_manifest(path) -> CorpusManifest:
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ManifestError(f"invalid manifest {path}: {exc}") from exc
    unknown = set(data) - _KEYS
    if unknown:
        raise ManifestError(f"unknown manifest keys: {', '.join(sorted(unknown))}")
    base = path.parent
    profile = None
    if "profile" in data:
        try:
            profile = parse_profile(str(data["profile"]))
        except ProfileError as exc:
            raise ManifestError(f"bad profile in {path}: {exc}") from exc
    name = data.get("name", path.parent.name)
    if not isinstance(name, str) or not name:
        raise ManifestError("'name' must be a non-empty string")
    return CorpusManifest(
        name=name,
        documents=_paths(data, "documents", base),
        profile=profile,
        taxonomies=_paths(data, "taxonomies", base),
        notes=str(data.get("notes", "")),
        path=path,
    )
