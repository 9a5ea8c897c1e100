import pytest

from quct.closed import Spectrum, closed_spectrum
from quct.errors import Disconnected, UnsupportedRingClass
from quct.invariants import (
    energy_closed,
    energy_of_spectrum,
    hyperenergetic,
    hyperenergetic_classifier,
    moment_closed,
    ramanujan_check,
    ramanujan_classified,
    triangles_closed,
)
from quct.qext import QuadExt
from quct.rings import enumerate_rings, ring

S5 = QuadExt.sqrt(5)


def test_energy_pins():
    assert energy_closed(ring("Z9")) == 12
    assert energy_closed(ring("F5*F5")) == 24 + 8 * S5
    assert float(energy_closed(ring("F5*F5"))) == pytest.approx(41.889, abs=1e-3)
    assert energy_closed(ring("F3*F5")) == 8 * (S5 + 1)
    assert energy_closed(ring("F3")) == 4
    assert energy_of_spectrum(closed_spectrum(ring("Z5"))) == 2 * (S5 + 1)
    assert energy_of_spectrum(Spectrum.from_pairs([(0, 4)])) == 0


def test_hyperenergetic_pins():
    assert hyperenergetic(ring("F13")) == (True, True)
    assert hyperenergetic(ring("F5*F5")) == (False, False)
    assert hyperenergetic(ring("F9")) == (False, True)
    assert energy_closed(ring("F9")) == 16
    assert hyperenergetic_classifier(ring("Z9")) is False
    assert hyperenergetic(ring("F3*F5")) == (False, False)
    assert hyperenergetic(ring("F3*F13"))[0] is True


def test_moment_pins():
    assert moment_closed(ring("Z9"), 3) == 162
    assert moment_closed(ring("Z5"), 2) == 10
    for r in enumerate_rings(100):
        assert moment_closed(r, 1) == 0
        assert moment_closed(r, 2) == r.order * closed_spectrum(r).entries[0][0].as_integer()
    with pytest.raises(ValueError):
        moment_closed(ring("Z9"), 0)


def test_moments_equal_spectrum_power_sums():
    for r in enumerate_rings(300):
        s = closed_spectrum(r)
        for k in (3, 4, 5):
            assert s.moment(k) == moment_closed(r, k)


def test_triangle_pins():
    assert triangles_closed(ring("Z3")) == 1
    assert triangles_closed(ring("Z13")) == 26
    assert triangles_closed(ring("Z9")) == 27
    assert triangles_closed(ring("Z5")) == 0


def test_ramanujan_pins():
    f3f5 = closed_spectrum(ring("F3*F5"))
    assert ramanujan_check(f3f5, 4)
    assert not ramanujan_check(closed_spectrum(ring("Z27")), 18)
    assert ramanujan_check(closed_spectrum(ring("Z49")), 42)
    assert ramanujan_classified(ring("Z9"))
    assert not ramanujan_classified(ring("Z25"))
    assert ramanujan_classified(ring("F3*F13"))
    with pytest.raises(Disconnected):
        ramanujan_check(Spectrum.from_pairs([(2, 2), (-2, 2)]), 2)


def test_unsupported_rings_are_refused():
    for fn in (energy_closed, triangles_closed, ramanujan_classified):
        with pytest.raises(UnsupportedRingClass):
            fn(ring("F3*F7"))
