"""Turn a dataclass of experiment settings into command-line flags."""

from __future__ import annotations

import argparse
import dataclasses
import json
from typing import Any, TypeVar

T = TypeVar("T")


def parse_config(cls: type[T], description: str) -> T:
    parser = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        flag = "--" + f.name.replace("_", "-")
        if isinstance(default, bool):
            parser.add_argument(flag, action=argparse.BooleanOptionalAction, default=default)
        elif isinstance(default, (tuple, list)):
            # tuples are passed as JSON, e.g. --exponents "[3, 3]"
            parser.add_argument(flag, type=json.loads, default=default)
        else:
            parser.add_argument(flag, type=type(default), default=default)
    ns = parser.parse_args()
    return cls(**{f.name: _freeze(getattr(ns, f.name)) for f in dataclasses.fields(cls)})


def _freeze(v: Any) -> Any:
    if isinstance(v, list):
        return tuple(_freeze(x) for x in v)
    return v
