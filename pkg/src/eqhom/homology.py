"""Boundary matrices over the counting coefficients, Smith normal form,
homology groups and the two Morse inequalities.

Tensoring the collapsed resolution with the counting module turns each
differential into an integer matrix (reduced modulo ``d`` when ``d`` is a
prime); rows are indexed by the chains of the dimension, columns by the
chains one dimension down.  Homology in dimension n is the kernel of the
n-th matrix modulo the image of the (n+1)-st.  Over the integers the
result is a free rank plus a divisibility chain of invariant factors
from the Smith normal form; over a prime field it is a dimension.

``s`` of a group is its minimum number of generators (rank plus the
number of nontrivial invariant factors over the integers, the dimension
over a prime field); ``rank`` is the free rank (the dimension over a
prime field, see the module docstring note below).  The weak inequality
bounds ``s(H_n)`` by the number of n-chains; the strong one alternates
chain counts against ranks.  At dimension 2 the strong inequality is the
axiom-count bound: #rules - #operations + #sorts is at least
s(H_2) - rank(H_1) + rank(H_0).

Note: for a prime modulus the torsion-free rank of a vector space would
be 0; we take rank to mean dimension (rank over the base PID, which is
then a field).  That choice makes the Euler-characteristic bookkeeping
of the strong inequality work uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chains import Cell, enumerate_chains
from .morse import morse_differential
from .rewrite import Trs, degree

Matrix = list[list[int]]


class CoefficientError(Exception):
    """The requested coefficient modulus is not 0 or an admissible prime."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def validate_modulus(d: int, trs_degree: int) -> None:
    """The counting module is well-defined for d dividing the degree; the
    homology theorems additionally need d zero or prime."""
    if d == 0:
        if trs_degree != 0:
            raise CoefficientError(
                f"modulus 0 needs degree 0, system has degree {trs_degree}")
        return
    if not is_prime(d):
        raise CoefficientError(f"modulus {d} is neither 0 nor prime")
    if trs_degree % d != 0:
        raise CoefficientError(
            f"prime {d} does not divide the system degree {trs_degree}")


@dataclass
class BoundaryMatrix:
    dim: int
    rows: list[Cell]      # chains of dimension dim
    cols: list[Cell]      # chains of dimension dim-1
    entries: Matrix       # entries[row][col]
    modulus: int


def boundary_matrices(trs: Trs, chains: dict[int, list[Cell]], max_dim: int,
                      d: int) -> dict[int, BoundaryMatrix]:
    """Counting-coefficient matrices of the collapsed differentials for
    dimensions 1..max_dim.  ``d`` must be 0 or a prime dividing the
    system's degree lattice."""
    validate_modulus(d, degree(trs))
    out: dict[int, BoundaryMatrix] = {}
    for n in range(1, max_dim + 1):
        rows = chains[n]
        cols = chains[n - 1]
        col_index = {c: j for j, c in enumerate(cols)}
        entries = [[0] * len(cols) for _ in rows]
        for i, cell in enumerate(rows):
            for target, coeff in morse_differential(cell, trs, "count").items():
                j = col_index.get(target)
                if j is None:
                    raise ValueError(
                        f"differential of {cell!r} hits {target!r}, "
                        f"which is not an enumerated chain")
                entries[i][j] = coeff if d == 0 else coeff % d
        out[n] = BoundaryMatrix(n, list(rows), list(cols), entries, d)
    return out


def matrix_product(a: BoundaryMatrix, b: BoundaryMatrix) -> Matrix:
    """Rows of ``a`` (dim n+1) composed into ``b`` (dim n): the result
    must vanish for a chain complex."""
    assert a.dim == b.dim + 1
    m = len(a.rows)
    out = [[0] * len(b.cols) for _ in range(m)]
    for i in range(m):
        for k, mid in enumerate(b.rows):
            aik = a.entries[i][k]
            if aik == 0:
                continue
            for j in range(len(b.cols)):
                out[i][j] += aik * b.entries[k][j]
    if a.modulus:
        out = [[v % a.modulus for v in row] for row in out]
    return out


def smith_normal_form(matrix: Matrix) -> tuple[list[int], int]:
    """Invariant factors (nonneg, divisibility chain) and rank.

    Exact integer arithmetic with minimal-absolute-value pivoting; safe
    for arbitrarily large entries.
    """
    a = [row[:] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        # clear the pivot row and column; restart if a remainder survives
        while True:
            if a[t][t] < 0:
                a[t] = [-v for v in a[t]]
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    for j in range(t, n):
                        a[i][j] -= q * a[t][j]
                if a[i][t]:
                    a[t], a[i] = a[i], a[t]
                    done = False
                    break
            if not done:
                continue
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for i in range(t, m):
                        a[i][j] -= q * a[i][t]
                if a[t][j]:
                    for i in range(m):
                        a[i][t], a[i][j] = a[i][j], a[i][t]
                    done = False
                    break
            if done:
                break
        # divisibility: fold any non-multiple into the pivot's column
        p = abs(a[t][t])
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(t, n):
                a[t][j] += a[offender][j]
            continue
        diag.append(p)
        t += 1
    return diag, len(diag)


def fp_rank(matrix: Matrix, p: int) -> int:
    """Rank over the field with ``p`` elements by Gaussian elimination."""
    a = [[v % p for v in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    rank = 0
    for col in range(n):
        pivot = next((i for i in range(rank, m) if a[i][col] % p), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [(v * inv) % p for v in a[rank]]
        for i in range(m):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [(v - f * w) % p for v, w in zip(a[i], a[rank])]
        rank += 1
        if rank == m:
            break
    return rank


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple[int, ...]  # invariant factors > 1, divisibility chain

    @property
    def generators(self) -> int:
        """Minimum number of generators (the ``s`` of the inequalities)."""
        return self.rank + len(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def describe(self, d: int) -> str:
        if d:
            return "0" if self.rank == 0 else f"(Z/{d})^{self.rank}"
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def homology_group(matrices: dict[int, BoundaryMatrix], n: int, d: int,
                   chain_counts: dict[int, int]) -> HomologyGroup:
    """H_n of the tensored complex: ker of matrix n modulo image of
    matrix n+1 (the n=0 kernel is everything)."""
    if n not in chain_counts or n + 1 not in chain_counts:
        raise ValueError(f"chains not enumerated through dimension {n + 1}")
    if n >= 1 and chain_counts[n] and n not in matrices:
        raise ValueError(f"need the boundary matrix at dimension {n}")
    if chain_counts[n + 1] and n + 1 not in matrices:
        raise ValueError(f"need the boundary matrix at dimension {n + 1}")
    dim_n = chain_counts[n]
    below = matrices.get(n)
    above = matrices.get(n + 1)
    below_entries = below.entries if below else []
    above_entries = above.entries if above else []
    if d == 0:
        rank_below = smith_normal_form(below_entries)[1] if below_entries else 0
        factors, rank_above = (smith_normal_form(above_entries)
                               if above_entries else ([], 0))
        kernel = dim_n - rank_below if n > 0 else dim_n
        torsion = tuple(f for f in factors if f > 1)
        return HomologyGroup(kernel - rank_above, torsion)
    rank_below = fp_rank(below_entries, d) if below_entries else 0
    rank_above = fp_rank(above_entries, d) if above_entries else 0
    kernel = dim_n - rank_below if n > 0 else dim_n
    return HomologyGroup(kernel - rank_above, ())


@dataclass
class InequalityReport:
    dim: int
    modulus: int
    chain_counts: dict[int, int]
    groups: dict[int, HomologyGroup]
    weak_lhs: int
    weak_rhs: int
    strong_lhs: int
    strong_rhs: int

    @property
    def weak_holds(self) -> bool:
        return self.weak_lhs >= self.weak_rhs

    @property
    def strong_holds(self) -> bool:
        return self.strong_lhs >= self.strong_rhs

    def lines(self) -> list[str]:
        n = self.dim
        out = [
            f"coefficients: Z/{self.modulus}" if self.modulus else "coefficients: Z",
            f"weak inequality at n={n}: #chains_{n} = {self.weak_lhs} >= "
            f"s(H_{n}) = {self.weak_rhs}  [{'holds' if self.weak_holds else 'VIOLATED'}]",
            f"strong inequality at n={n}: {self.strong_lhs} >= {self.strong_rhs}  "
            f"[{'holds' if self.strong_holds else 'VIOLATED'}]",
        ]
        if n == 2:
            c = self.chain_counts
            out.append(
                f"axiom-count bound: #rules - #ops + #sorts = "
                f"{c[2]} - {c[1]} + {c[0]} = {c[2] - c[1] + c[0]} >= {self.strong_rhs}"
            )
        return out


def inequality_report(trs: Trs, d: int, n: int,
                      chains: dict[int, list[Cell]] | None = None) -> InequalityReport:
    """Instantiate both inequalities at dimension ``n``.

    Needs chains and matrices through dimension n+1 (the strong
    inequality's homology term at n uses the matrix above it).
    """
    if chains is None:
        chains = enumerate_chains(trs, n + 1)
    counts = {k: len(v) for k, v in chains.items()}
    matrices = boundary_matrices(trs, chains, n + 1, d)
    groups = {k: homology_group(matrices, k, d, counts) for k in range(n + 1)}
    weak_lhs = counts[n]
    weak_rhs = groups[n].generators
    strong_lhs = sum((-1) ** (n - i) * counts[i] for i in range(n + 1))
    strong_rhs = groups[n].generators + sum(
        (-1) ** (n - i) * groups[i].rank for i in range(n)
    )
    return InequalityReport(n, d, counts, groups, weak_lhs, weak_rhs,
                            strong_lhs, strong_rhs)
