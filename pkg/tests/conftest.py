import math

import pytest
from fastapi.testclient import TestClient

from afcsim.main import app
from afcsim.schemas.system import DerivedParams, SystemConfig
from afcsim.services.modulator import saturation_factor


def pytest_configure(config):
    """Register the 'integration' marker"""
    config.addinivalue_line(
        "markers",
        "integration: mark test as a long-running Monte Carlo integration test",
    )


def config_for(
    q_sq: float,
    mu: float = 0.01,
    sigma0_sq: float = 1.0,
    sigma_v_sq: float = 0.0,
    n_cycles: int = 12,
    x0: float = 0.0,
    n_zeta: float = 1.0,
    f0: float = 1.0,
) -> SystemConfig:
    """Config whose receiver SNR is q_sq: the carrier amplitude absorbs alpha"""
    a0 = saturation_factor(mu) * math.sqrt(q_sq * n_zeta * f0)
    return SystemConfig(
        x0=x0,
        sigma0_sq=sigma0_sq,
        sigma_v_sq=sigma_v_sq,
        a0=a0,
        gamma=1.0,
        n_zeta=n_zeta,
        f0=f0,
        mu=mu,
        n_cycles=n_cycles,
    )


def derived_for(q_sq: float, n_cycles: int = 12) -> DerivedParams:
    """Unit-noise derived parameters with the requested receiver SNR"""
    return DerivedParams(
        a=math.sqrt(q_sq),
        sigma_zeta_sq=1.0,
        alpha=1.0,
        q_sq=q_sq,
        w_sign=q_sq,
        n_cycles=n_cycles,
    )


@pytest.fixture
def make_config():
    return config_for


@pytest.fixture
def reference_config():
    """sigma0^2 = 1, sigma_v^2 = 1e-4, Q^2 = 3, mu = 0.01, n = 12"""
    return config_for(3.0, mu=0.01, sigma_v_sq=1e-4, n_cycles=12)


@pytest.fixture
def client():
    yield TestClient(app)


@pytest.fixture
def write_config(tmp_path):
    """Write a SystemConfig as a flat key = value file"""
    def _write(config: SystemConfig, name: str = "system.conf") -> str:
        path = tmp_path / name
        lines = ["# generated test system"]
        for key, value in config.model_dump(exclude_none=True).items():
            lines.append(f"{key} = {value!r}")
        path.write_text("\n".join(lines) + "\n")
        return str(path)

    return _write


@pytest.fixture
def make_derived():
    return derived_for
