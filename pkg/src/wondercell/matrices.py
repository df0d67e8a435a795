"""Small exact matrices over truncated series; sizes are 2..4."""

from __future__ import annotations

from wondercell.fieldarith import FieldConfig, FieldElem, PrecisionError


class Mat:
    """Dense matrix with FieldElem entries."""

    __slots__ = ("config", "rows")

    def __init__(self, config: FieldConfig, rows):
        self.config = config
        self.rows = [[config.elem(x) for x in row] for row in rows]
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")

    @staticmethod
    def identity(config: FieldConfig, n: int) -> "Mat":
        return Mat(config, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __mul__(self, other: "Mat") -> "Mat":
        n = self.n
        out = [
            [sum((self.rows[i][k] * other.rows[k][j] for k in range(n)), self.config.zero()) for j in range(n)]
            for i in range(n)
        ]
        return Mat(self.config, out)

    def scale(self, c: FieldElem) -> "Mat":
        return Mat(self.config, [[x * c for x in row] for row in self.rows])

    def map(self, fn) -> "Mat":
        return Mat(self.config, [[fn(i, j, x) for j, x in enumerate(row)] for i, row in enumerate(self.rows)])

    def transpose(self) -> "Mat":
        return Mat(self.config, [list(col) for col in zip(*self.rows)])

    def det(self) -> FieldElem:
        n = self.n
        if n == 1:
            return self.rows[0][0]
        acc = self.config.zero()
        for j in range(n):
            minor = Mat(self.config, [row[:j] + row[j + 1 :] for row in self.rows[1:]])
            term = self.rows[0][j] * minor.det()
            acc = acc + (term if j % 2 == 0 else -term)
        return acc

    def minor(self, rows, cols) -> FieldElem:
        return Mat(self.config, [[self.rows[i][j] for j in cols] for i in rows]).det()

    def leading_minor(self, k: int) -> FieldElem:
        """Determinant of the top-left k x k block."""
        idx = list(range(k))
        return self.minor(idx, idx)

    def trailing_minor(self, k: int) -> FieldElem:
        """Determinant of the bottom-right k x k block."""
        idx = list(range(self.n - k, self.n))
        return self.minor(idx, idx)

    def inv(self) -> "Mat":
        """Gauss-Jordan inverse; raises on a matrix singular to precision."""
        n = self.n
        a = [[x for x in row] for row in self.rows]
        b = [[self.config.elem(1 if i == j else 0) for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = None
            for r in range(col, n):
                if not a[r][col].is_zero():
                    piv = r
                    break
            if piv is None:
                raise ZeroDivisionError("matrix is singular to working precision")
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
            inv_lead = a[col][col].inv()
            a[col] = [x * inv_lead for x in a[col]]
            b[col] = [x * inv_lead for x in b[col]]
            for r in range(n):
                if r != col and not a[r][col].is_zero():
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                    b[r] = [x - f * y for x, y in zip(b[r], b[col])]
        return Mat(self.config, b)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat) or other.n != self.n:
            return NotImplemented
        return all(
            self.rows[i][j] == other.rows[i][j] for i in range(self.n) for j in range(self.n)
        )

    def __repr__(self):
        body = "; ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.rows)
        return f"Mat({body})"

    def projective_normalize(self) -> "Mat":
        """Scale so the first nonzero entry (row-major) is 1; canonical rep mod center."""
        for row in self.rows:
            for x in row:
                if not x.is_zero():
                    return self.scale(x.inv())
        raise ValueError("zero matrix")
