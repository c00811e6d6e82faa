"""Общие фикстуры: воспроизводимый генератор, настройки без .env, малые системы."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from adelab.config import Settings
from adelab.services import linear_ode

GOLDEN_SEED = 20240619


@pytest.fixture
def rng() -> random.Random:
    return random.Random(GOLDEN_SEED)


@pytest.fixture
def settings(monkeypatch, tmp_path) -> Settings:
    monkeypatch.chdir(tmp_path)
    for key in ("ADELAB_THREADS", "ADELAB_LOG_LEVEL", "ADELAB_GOLDEN_DIR"):
        monkeypatch.delenv(key, raising=False)
    return Settings(threads=1)


@pytest.fixture
def lame_sixth() -> linear_ode.OdeSystem:
    return linear_ode.lame(Fraction(1, 6), Fraction(0), Fraction(0), Fraction(1))


@pytest.fixture
def hyp_half() -> linear_ode.OdeSystem:
    return linear_ode.hypergeometric(Fraction(1, 2), Fraction(1, 2), Fraction(1))
