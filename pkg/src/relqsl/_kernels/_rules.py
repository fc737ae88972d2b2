"""Gauss-Kronrod 7/15 rule on [-1, 1].

The 15 Kronrod nodes contain the 7 Gauss-Legendre nodes, so one set of
integrand evaluations yields both estimates.
"""
import numpy as np

_XGK_HALF = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
)
_WGK_HALF = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
)
_WGK_CENTER = 0.209482141084727828012999174891714
# Gauss weights for the odd-indexed Kronrod nodes (0.949..., 0.741..., 0.405...) and the center
_WG_HALF = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
)
_WG_CENTER = 0.417959183673469387755102040816327

NODES = np.array([-x for x in _XGK_HALF] + [0.0] + list(reversed(_XGK_HALF)))
KRONROD_WEIGHTS = np.array(list(_WGK_HALF) + [_WGK_CENTER] + list(reversed(_WGK_HALF)))
GAUSS_WEIGHTS = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG_HALF):
    GAUSS_WEIGHTS[_i] = _w
    GAUSS_WEIGHTS[14 - _i] = _w
GAUSS_WEIGHTS[7] = _WG_CENTER

NODES.setflags(write=False)
KRONROD_WEIGHTS.setflags(write=False)
GAUSS_WEIGHTS.setflags(write=False)
