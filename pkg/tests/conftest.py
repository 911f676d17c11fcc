import pytest

from ringserrin.domains import perturbed_domains
from ringserrin.model import inner_radius
from ringserrin.solver import RingDomain, solve


@pytest.fixture(scope="session")
def annulus_field():
    """Model annulus with core radius 0.5 at the default resolution."""
    return solve(RingDomain(inner_radius(0.5)), (64, 48))


@pytest.fixture(scope="session")
def model_fields():
    return {R: solve(RingDomain(inner_radius(R)), (96, 64)) for R in (0.5, 0.7, 0.9)}


@pytest.fixture(scope="session")
def perturbed_fields():
    return {d.name: (d, solve(d.domain, (96, 64))) for d in perturbed_domains()}
