"""Runtime knobs shared by all modules."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass
class Settings:
    member_cap: int = 10**6
    dim_cap: int = 4096
    # re-run leibniz_check on every HS-derivation produced by a group operation
    eager_certify: bool = False


def _from_env() -> Settings:
    s = Settings()
    cap = os.environ.get("HSFORGE_MEMBER_CAP")
    if cap:
        s.member_cap = int(cap)
    return s


settings = _from_env()
