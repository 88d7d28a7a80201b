"""JSON input schemas, report output and the bundled example corpus."""

from .examples import available_examples, example_index, example_pair, load_example
from .serialization import dumps_report, load_json, parse_pair, write_report

__all__ = [
    "load_json",
    "parse_pair",
    "dumps_report",
    "write_report",
    "available_examples",
    "load_example",
    "example_pair",
    "example_index",
]
