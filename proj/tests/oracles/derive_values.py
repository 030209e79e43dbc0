"""Reference values for the frozen fixtures in the unit tests.

Independent of the C++ code paths: meets are computed as subspace
intersections via null spaces, joins via orthonormal bases of the stacked
spans, principal angles via scipy. Run with numpy + scipy:

    python3 tests/oracles/derive_values.py
"""
import numpy as np
from scipy.linalg import null_space, orth, subspace_angles


def proj(cols):
    q = orth(np.array(cols, dtype=complex).T)
    return q @ q.conj().T


def basis(p):
    w, v = np.linalg.eigh(p)
    return v[:, w > 0.5]


def meet(p, q):
    a, b = basis(p), basis(q)
    if a.shape[1] == 0 or b.shape[1] == 0:
        return np.zeros_like(p)
    ns = null_space(np.hstack([a, -b]), rcond=1e-9)
    if ns.shape[1] == 0:
        return np.zeros_like(p)
    return proj((a @ ns[: a.shape[1]]).T)


def join(p, q):
    return proj(np.hstack([basis(p), basis(q)]).T)


def upper(p, q):
    d = p - q
    return join(p, q) - d @ d


def show(name, values):
    print(f"{name} = {{" + ", ".join(f"{v:.17g}" for v in values) + "}")


# Fixture: dim 5, P = span{a, s}, Q = span{b, s} with a shared vector s.
s = [1, 1j, 0, 1, 0]
a = [1, 0, 2, 0, -1]
b = [0, 1, 1 - 1j, 0, 2]
P = proj([a, s])
Q = proj([b, s])
show("shared_cos_angles", sorted(np.cos(subspace_angles(basis(P), basis(Q)))))
show("shared_meet_trace", [np.trace(meet(P, Q)).real])
show("shared_join_trace", [np.trace(join(P, Q)).real])
show("shared_upper_eigs", np.linalg.eigvalsh(upper(P, Q)))
rho_vec = np.array([1, 2, 0, 1j, -1], dtype=complex)
rho = np.outer(rho_vec, rho_vec.conj()) / np.vdot(rho_vec, rho_vec).real
rho = 0.6 * rho + 0.4 * np.eye(5) / 5
show("shared_interval", [np.trace(rho @ meet(P, Q)).real, np.trace(rho @ upper(P, Q)).real])

# Pseudo-inverse of a rank-2 complex 3x3 matrix.
M = np.array([[1, 2j, 0], [0, 1, 1], [1, 2j + 1, 1]], dtype=complex)
Mp = np.linalg.pinv(M)
show("pinv_real", Mp.real.flatten())
show("pinv_imag", Mp.imag.flatten())

# Two-particle scene: qubit pair at angle 0.4, qutrit pair (rank 2, rank 1).
t = 0.4
P1 = proj([[1, 0]])
Q1 = proj([[np.cos(t), np.sin(t)]])
P2 = proj([[1, 0, 0], [0, 1, 0]])
Q2 = proj([[1, 1, 1]])
local = np.kron(upper(P1, Q1), upper(P2, Q2))
gap = local - upper(np.kron(P1, P2), np.kron(Q1, Q2))
show("scene_gap_eigs", np.linalg.eigvalsh(gap))
show("scene_gap_max_abs", [np.abs(gap).max()])
D = upper(np.kron(P1, P2), np.kron(Q1, Q2)) - upper(np.kron(P1, Q2), np.kron(Q1, P2))
show("scene_pairing_trace_maxabs", [np.trace(D).real, np.abs(D).max()])
show("scene_lower_trace", [np.trace(meet(np.kron(P1, P2), np.kron(Q1, Q2))).real])

# Qubit x/z on both sides in the (I + sigma)/2 form.
Px = proj([[1, 1]])
Pz = proj([[1, 0]])
gap_xz = np.kron(upper(Px, Pz), upper(Px, Pz)) - upper(np.kron(Px, Px), np.kron(Pz, Pz))
show("xz_gap_eigs", np.linalg.eigvalsh(gap_xz))

# Separable witness at (a, b, phi) = (0.7, 0.3, pi/3), documented convention.
Pm = proj([[1, -1]])
Qm = proj([[0, 1]])
Dm = upper(np.kron(Pm, Pm), np.kron(Qm, Qm)) - upper(np.kron(Pm, Qm), np.kron(Qm, Pm))
aa, bb, ph = 0.7, 0.3, np.pi / 3
r = np.array([[aa, bb * np.exp(1j * ph)], [bb * np.exp(-1j * ph), 1 - aa]])
show("witness_0.7_0.3_pi3", [np.trace(Dm @ np.kron(r, r)).real])
