import cmath

from hypothesis import settings

settings.register_profile("exact", max_examples=1000, derandomize=True, deadline=None)
settings.load_profile("exact")


def numeric(x):
    """Complex value of a CycNumber, used only as an independent test oracle."""
    n = x.conductor
    return sum(complex(c) * cmath.exp(2j * cmath.pi * k / n) for k, c in enumerate(x.coeffs))
