from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from planar_gca.exactfield import Scalar

small_fracs = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 9))
scalars = st.builds(Scalar, small_fracs, small_fracs)
nonzero_scalars = scalars.filter(bool)
