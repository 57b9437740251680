"""U_p on truncated double expansions and the ordinary projector
e = lim U^(n!) on finite p-adic linear models.

The projector is computed on caller-supplied matrices (fixtures stand in
for the infinite-dimensional space of p-adic forms).  Convergence needs
integral entries; the limit acts as the identity on unit-root eigenvectors
and kills positive-slope ones.  The double-coset relation
U_p^2 = p^(gk - g(g+1)) U_(p,g) is recorded as a documented identity on
fixture models and is not a computation this module performs.
"""

from dataclasses import dataclass

from .errors import ConvergenceError, DomainError
from .padic import PAdic

__all__ = ["LinearModel", "up_on_qexp", "ordinary_projector",
           "tensor_projector", "projector_rank", "twist_stability_check"]


@dataclass(frozen=True)
class LinearModel:
    """d x d matrix of PAdic entries with basis labels."""

    p: int
    aprec: int
    rows: tuple
    labels: tuple = ()

    @property
    def dim(self):
        return len(self.rows)

    @classmethod
    def from_ints(cls, mat, p, aprec):
        rows = tuple(tuple(PAdic.from_rational(x, p, aprec) for x in row)
                     for row in mat)
        return cls(p, aprec, rows)

    def is_integral(self):
        return all(x.unit == 0 or x.val >= 0 for row in self.rows for x in row)

    def mul(self, other):
        n = self.dim
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = PAdic.zero(self.p, self.aprec)
                for k in range(n):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            rows.append(tuple(row))
        return LinearModel(self.p, self.aprec, tuple(rows), self.labels)

    def pow(self, k):
        out = LinearModel.identity(self.dim, self.p, self.aprec)
        base = self
        while k:
            if k & 1:
                out = out.mul(base)
            base = base.mul(base)
            k >>= 1
        return out

    @classmethod
    def identity(cls, n, p, aprec):
        rows = tuple(tuple(PAdic.one(p, aprec) if i == j
                           else PAdic.zero(p, aprec) for j in range(n))
                     for i in range(n))
        return cls(p, aprec, rows)

    def eq_mod(self, other, m):
        return all(a.eq_mod(b, m)
                   for ra, rb in zip(self.rows, other.rows)
                   for a, b in zip(ra, rb))

    def apply(self, vec):
        return tuple(
            sum((self.rows[i][k] * vec[k] for k in range(self.dim)),
                PAdic.zero(self.p, self.aprec))
            for i in range(self.dim))

    def residue_matrix(self):
        """Entries mod p (requires integrality)."""
        out = []
        for row in self.rows:
            r = []
            for x in row:
                if x.unit and x.val < 0:
                    raise DomainError("model is not integral")
                r.append(x.residue() % self.p)
            out.append(r)
        return out

    def to_json(self):
        return {"p": self.p, "precision": self.aprec, "dim": self.dim,
                "rows": [[x.to_json() for x in row] for row in self.rows]}

    @classmethod
    def from_json(cls, d):
        rows = tuple(tuple(PAdic.from_json(x) for x in row)
                     for row in d["rows"])
        return cls(d["p"], d["precision"], rows)


def up_on_qexp(qexp, p, side="both"):
    """Index map of U_p: output coefficient at (T1, T4) is the input
    coefficient at (p T1, T4), (T1, p T4) or (p T1, p T4); the truncation
    bound shrinks by p on each affected side."""
    from .eisenstein import QExp2
    if side not in ("left", "right", "both"):
        raise DomainError("side must be left, right or both")
    sl = p if side in ("left", "both") else 1
    sr = p if side in ("right", "both") else 1
    b1, b4 = qexp.bounds
    out = QExp2(qexp.g, (b1 // sl, b4 // sr))
    for (s1, s4), v in qexp.entries.items():
        if not _divisible(s1, sl) or not _divisible(s4, sr):
            continue
        t1 = tuple(tuple(x // sl for x in r) for r in s1)
        t4 = tuple(tuple(x // sr for x in r) for r in s4)
        out.entries[(t1, t4)] = v
    return out


def _divisible(mat, s):
    return s == 1 or all(x % s == 0 for r in mat for x in r)


def _trace(mat):
    return sum(mat[i][i] for i in range(len(mat)))


def ordinary_projector(model, target_prec=None):
    """e = lim_n U^(n!), by the stable iteration A_(n+1) = A_n^(n+1).

    Stops when consecutive iterates agree mod p^target_prec; raises
    ConvergenceError past n > target_prec * dim + 10.
    """
    if not model.is_integral():
        raise DomainError("ordinary projector needs an integral matrix")
    n_target = target_prec or model.aprec
    cap = n_target * model.dim + 10
    a = model  # A_1 = M^(1!)
    n = 1
    while True:
        nxt = a.pow(n + 1)  # A_(n+1) = (A_n)^(n+1) = M^((n+1)!)
        if nxt.eq_mod(a, n_target):
            return nxt
        a = nxt
        n += 1
        if n > cap:
            raise ConvergenceError(
                f"U^(n!) did not stabilize mod p^{n_target} by n = {cap}")


def projector_rank(e):
    """Rank of the reduction mod p (equals the number of unit eigenvalues
    for a projector commuting with the model)."""
    m = e.residue_matrix()
    p = e.p
    n = len(m)
    rank = 0
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, n) if m[i][col] % p), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = pow(m[row][col], -1, p)
        m[row] = [x * inv % p for x in m[row]]
        for i in range(n):
            if i != row and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[row])]
        rank += 1
        row += 1
    return rank


def tensor_projector(left, right):
    """Kronecker product e_L (x) e_R acting on the double expansion model."""
    if left.p != right.p:
        raise DomainError("mixed primes in tensor projector")
    p = left.p
    aprec = min(left.aprec, right.aprec)
    nl, nr = left.dim, right.dim
    rows = []
    for i in range(nl):
        for k in range(nr):
            row = []
            for j in range(nl):
                for l in range(nr):
                    row.append(left.rows[i][j] * right.rows[k][l])
            rows.append(tuple(row))
    return LinearModel(p, aprec, tuple(rows))


def _solve_unit_system(mat, rhs, p, m):
    """Solve mat x = rhs mod p^m (mat d x r with unit-pivot column rank r)."""
    d, r = len(mat), len(mat[0])
    q = p**m
    a = [[x % q for x in row] + [rhs[i] % q] for i, row in enumerate(mat)]
    row = 0
    piv_cols = []
    for col in range(r):
        piv = next((i for i in range(row, d) if a[i][col] % p), None)
        if piv is None:
            raise DomainError("operator is not invertible on the ordinary part")
        a[row], a[piv] = a[piv], a[row]
        inv = pow(a[row][col], -1, q)
        a[row] = [x * inv % q for x in a[row]]
        for i in range(d):
            if i != row and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % q for x, y in zip(a[i], a[row])]
        piv_cols.append(col)
        row += 1
    for i in range(row, d):
        if a[i][r] % q:
            raise DomainError("system is inconsistent on the ordinary part")
    return [a[i][r] for i in range(r)]


def twist_stability_check(model, vec, i, j, target_prec):
    """Check U^(-2i) e U^(2i) F = U^(-2j) e U^(2j) F mod p^target_prec.

    The inverse powers are taken on the ordinary part: the system
    U^(2a) x = e U^(2a) F is solved inside im(e), which requires U to act
    invertibly there (unit pivots)."""
    p, m = model.p, target_prec
    e = ordinary_projector(model, m)
    # residue basis of im(e): pivot columns of e mod p
    res = e.residue_matrix()
    n = model.dim
    piv_cols = _pivot_columns(res, p)
    if not piv_cols:
        # e = 0: both sides vanish
        return True
    basis = [[e.rows[r][c].residue() for c in piv_cols] for r in range(n)]
    results = []
    for a in (i, j):
        ua = model.pow(2 * a)
        uf = ua.apply(vec)
        y = e.apply(uf)
        # solve U^(2a) (B c) = y for coordinates c in im(e)
        ub = _int_matmul(ua, basis, p, m)
        coords = _solve_unit_system(ub, [_res(x, p, m) for x in y], p, m)
        x = [sum(basis[r][k] * coords[k] for k in range(len(piv_cols))) % p**m
             for r in range(n)]
        results.append(x)
    return all((xa - xb) % p**m == 0 for xa, xb in zip(*results))


def _pivot_columns(mat, p):
    m = [row[:] for row in mat]
    n = len(m)
    row = 0
    cols = []
    for col in range(n):
        piv = next((i for i in range(row, n) if m[i][col] % p), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = pow(m[row][col], -1, p)
        m[row] = [x * inv % p for x in m[row]]
        for i in range(n):
            if i != row and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[row])]
        cols.append(col)
        row += 1
    return cols


def _int_matmul(model, basis, p, m):
    q = p**m
    n = model.dim
    r = len(basis[0])
    num = [[_res(model.rows[i][k], p, m) for k in range(n)] for i in range(n)]
    return [[sum(num[i][k] * basis[k][j] for k in range(n)) % q
             for j in range(r)] for i in range(n)]


def _res(x, p, m):
    return x.residue() % p**m
