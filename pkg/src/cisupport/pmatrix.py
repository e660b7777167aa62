"""Degree-homogeneous polynomial matrices with row/column twists.

A matrix represents a graded map of free modules  (+)A(-c_j) -> (+)A(-r_i);
every nonzero entry at (i, j) must be homogeneous of degree c_j - r_i.
Empty matrices carry explicit row/column counts so rank bookkeeping stays
unambiguous.
"""

from __future__ import annotations

from .poly import PolyRing, render_poly


class PolyMatrix:
    def __init__(self, ring: PolyRing, entries, row_twists, col_twists):
        self.ring = ring
        self.entries = [list(row) for row in entries]
        self.row_twists = tuple(row_twists)
        self.col_twists = tuple(col_twists)
        self.nrows = len(self.row_twists)
        self.ncols = len(self.col_twists)
        if len(self.entries) != self.nrows:
            raise ValueError("row count mismatch")
        for row in self.entries:
            if len(row) != self.ncols:
                raise ValueError("column count mismatch")

    @classmethod
    def zero(cls, ring, row_twists, col_twists):
        return cls(
            ring,
            [[ring.zero() for _ in col_twists] for _ in row_twists],
            row_twists,
            col_twists,
        )

    @classmethod
    def identity(cls, ring, twists):
        m = cls.zero(ring, twists, twists)
        for i in range(len(twists)):
            m.entries[i][i] = ring.one()
        return m

    def check_homogeneous(self):
        """Verify the twist/degree invariant on every nonzero entry."""
        for i in range(self.nrows):
            for j in range(self.ncols):
                e = self.entries[i][j]
                if e.is_zero():
                    continue
                want = self.col_twists[j] - self.row_twists[i]
                if not e.is_homogeneous() or e.degree() != want:
                    raise ValueError(
                        f"entry ({i},{j}) is not homogeneous of degree {want}"
                    )
        return self

    def column(self, j):
        return [self.entries[i][j] for i in range(self.nrows)]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        return PolyMatrix(
            self.ring,
            [[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            tuple(-t for t in self.col_twists),
            tuple(-t for t in self.row_twists),
        )

    def scale(self, c):
        return PolyMatrix(
            self.ring,
            [[e.scale(c) for e in row] for row in self.entries],
            self.row_twists,
            self.col_twists,
        )

    def __neg__(self):
        return self.scale(self.ring.field.neg(self.ring.field.one))

    def mul(self, other: "PolyMatrix", reduce=None) -> "PolyMatrix":
        """Matrix product, optionally reducing entries with the given map."""
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = self.ring.zero()
                for k in range(self.ncols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(reduce(acc) if reduce else acc)
            out.append(row)
        return PolyMatrix(self.ring, out, self.row_twists, other.col_twists)

    def apply(self, column, reduce=None):
        """Apply to a column vector of polynomials."""
        out = []
        for i in range(self.nrows):
            acc = self.ring.zero()
            for k in range(self.ncols):
                a = self.entries[i][k]
                if a.is_zero() or column[k].is_zero():
                    continue
                acc = acc + a * column[k]
            out.append(reduce(acc) if reduce else acc)
        return out

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def map_entries(self, func) -> "PolyMatrix":
        return PolyMatrix(
            self.ring,
            [[func(e) for e in row] for row in self.entries],
            self.row_twists,
            self.col_twists,
        )

    @classmethod
    def block(cls, ring, rows_of_blocks):
        """Assemble from a 2D grid of PolyMatrix blocks (all explicit)."""
        grid = rows_of_blocks
        row_twists = []
        for band in grid:
            row_twists.extend(band[0].row_twists)
        col_twists = []
        for b in grid[0]:
            col_twists.extend(b.col_twists)
        entries = []
        for band in grid:
            for i in range(band[0].nrows):
                row = []
                for b in band:
                    row.extend(b.entries[i])
                entries.append(row)
        return cls(ring, entries, row_twists, col_twists)

    def render(self):
        return [[render_poly(e) for e in row] for row in self.entries]

    def content_key(self):
        return (
            self.ring.key(),
            self.row_twists,
            self.col_twists,
            tuple(tuple(e.terms for e in row) for row in self.entries),
        )

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and other.content_key() == self.content_key()

    def __repr__(self):
        return f"PolyMatrix({self.nrows}x{self.ncols})"
