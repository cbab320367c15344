"""Corpus-level helpers: preprocessing, statistics, manifests, JSON interchange."""

from .interchange import SCHEMA, export_records, import_records, statement_from_dict, statement_to_dict
from .manifest import CorpusManifest, load_manifest
from .preprocess import preprocess
from .stats import FrequencyTable, stats

__all__ = [
    "SCHEMA",
    "CorpusManifest",
    "FrequencyTable",
    "export_records",
    "import_records",
    "load_manifest",
    "preprocess",
    "statement_from_dict",
    "statement_to_dict",
    "stats",
]
