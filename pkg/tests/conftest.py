"""Session fixtures for the germs whose computations are expensive.

The corank-2 quintic germ needs a general (module-kernel) presentation
that takes several seconds to build; everything downstream of it is
shared here so the suite pays that price once.
"""

import pytest

from germkit.doublepoint import dpc_equation
from germkit.fitting import (
    image_equation,
    presentation_for,
    triple_point_count,
)
from germkit.germs import parse_germ

CORANK2_QUINTIC = "(x^2, x^2*y + x*y^2 + y^3, x^5 + y^5)"


@pytest.fixture(scope="session")
def g235():
    return parse_germ(CORANK2_QUINTIC)


@pytest.fixture(scope="session")
def p235(g235):
    return presentation_for(g235)


@pytest.fixture(scope="session")
def image235(g235, p235):
    return image_equation(g235, presentation=p235)


@pytest.fixture(scope="session")
def t235(g235, p235):
    return triple_point_count(g235, presentation=p235)


@pytest.fixture(scope="session")
def curve235(g235):
    return dpc_equation(g235)


@pytest.fixture(scope="session")
def report235(g235):
    from germkit.invariants import invariant_report

    return invariant_report(g235)
