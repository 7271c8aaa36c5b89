from functools import lru_cache

import numpy as np
import pytest
from hypothesis import settings


from marketeff.series import profile
from marketeff.synth import SynthSpec, generate_fgn

# fixed example database per run: failures reproduce and statistical bands do not flake
settings.register_profile("default", derandomize=True, deadline=None)
settings.load_profile("default")

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@lru_cache(maxsize=None)
def fgn_batch(h: float, t: int, n_seeds: int, first_seed: int = 0) -> tuple[np.ndarray, ...]:
    """Exact fGn samples for seeds first_seed .. first_seed + n_seeds - 1 (cached per session)."""
    return tuple(generate_fgn(SynthSpec("fgn", t, s, h=h)).values for s in range(first_seed, first_seed + n_seeds))


@lru_cache(maxsize=None)
def fbm_batch(h: float, t: int, n_seeds: int, first_seed: int = 0) -> tuple[np.ndarray, ...]:
    """Profiles (integrated, demeaned) of the matching fGn batch."""
    return tuple(profile(x).values for x in fgn_batch(h, t, n_seeds, first_seed))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def acceptance_record():
    def record(criterion: str, passed: bool, detail: str) -> None:
        _ACCEPTANCE.append((criterion, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {criterion}: {detail}")
