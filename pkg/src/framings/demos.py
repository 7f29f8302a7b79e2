"""Bundled demo problems, built in code and run through the normal pipeline."""
from __future__ import annotations

import numpy as np

from . import serialize as ser
from .framing import Framing
from .numlin import Subspace

__all__ = ["DEMOS", "demo_problem", "mercedes_vectors", "forward_difference", "cumulative_sum"]


def mercedes_vectors() -> np.ndarray:
    """Unit vectors at 90, 210 and 330 degrees in R^2, as rows in C^2."""
    theta = np.deg2rad([90.0, 210.0, 330.0])
    return np.stack([np.cos(theta), np.sin(theta)], axis=1).astype(complex)


def forward_difference(d: int) -> np.ndarray:
    """``(A f)_k = -i d (f_{k+1} - f_k)``, last row zero."""
    A = np.zeros((d, d), dtype=complex)
    k = np.arange(d - 1)
    A[k, k + 1] = -1j * d
    A[k, k] = 1j * d
    return A


def cumulative_sum(d: int) -> np.ndarray:
    """``(B f)_k = (i / d) sum_{j <= k} f_j``.

    With this sign ``B A^*`` is the identity on the first ``d - 1``
    coordinates for ``A = forward_difference(d)``.
    """
    return (1j / d) * np.tril(np.ones((d, d), dtype=complex))


def _onb() -> dict:
    return {"kind": "framing",
            "payload": {"framing": ser.framing_to_json(Framing.orthonormal(2))}}


def _mercedes() -> dict:
    u = mercedes_vectors()
    fr = Framing(2 / 3 * u, u)
    return {"kind": "framing",
            "payload": {"framing": ser.framing_to_json(fr),
                        "F": ser.subspace_to_json(Subspace.full(2))}}


def _derivative_volterra() -> dict:
    d = 8
    return {
        "kind": "generator",
        "payload": {
            "framing": ser.framing_to_json(Framing.orthonormal(d)),
            "A": ser.cmat_to_json(forward_difference(d)),
            "B": ser.cmat_to_json(cumulative_sum(d)),
            "dual": True,
        },
    }


def _coin() -> dict:
    return {"kind": "naimark",
            "payload": {"dimE": 1, "atoms": [ser.cmat_to_json([[0.5]]),
                                             ser.cmat_to_json([[0.5]])]}}


def _qubit_povm() -> dict:
    atoms = [np.diag([0.75, 0.25]), np.diag([0.25, 0.75])]
    return {"kind": "naimark",
            "payload": {"dimE": 2, "atoms": [ser.cmat_to_json(E) for E in atoms]}}


def _framing_to_naimark() -> dict:
    v = np.sqrt(2 / 3) * mercedes_vectors()
    return {"kind": "ovm",
            "payload": {"framing": ser.framing_to_json(Framing(v, v)), "naimark": True}}


DEMOS = {
    "onb": _onb,
    "mercedes": _mercedes,
    "derivative-volterra": _derivative_volterra,
    "coin": _coin,
    "qubit-povm": _qubit_povm,
    "framing-to-naimark": _framing_to_naimark,
}


def demo_problem(name: str) -> dict:
    return DEMOS[name]()
