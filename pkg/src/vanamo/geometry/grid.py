"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np
import h5py as h5

GRID_FORMAT_VERSION = 1


class Cell(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class GridDims:
    """Size of the workspace lattice.

    Parameters
    ----------
    width : int
        number of columns (x)
    height : int
        number of rows (y)
    resolution : float
        meters per cell; metadata only, never used by the algorithms
    """

    width: int
    height: int
    resolution: float = 0.1

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f'Grid must be at least 1x1, got {self.width}x{self.height}')
        if self.resolution <= 0:
            raise ValueError(f'Resolution must be positive, got {self.resolution}')

    @property
    def shape(self):
        """numpy shape (rows, columns)"""
        return (self.height, self.width)

    @property
    def size(self):
        return self.width * self.height

    @property
    def diagonal(self):
        return float(np.hypot(self.width, self.height))

    def contains(self, x, y):
        return 0 <= x < self.width and 0 <= y < self.height

    def flat(self, x, y):
        """Row-major index of cell (x, y)"""
        return y * self.width + x

    def unflat(self, index):
        return Cell(index % self.width, index // self.width)

    def __str__(self):
        return f'{self.width}x{self.height} @ {self.resolution} m'


def ring_rotate(offset, steps):
    """Rotate a cell offset by `steps` multiples of 45 degrees.

    The offset is moved along its square ring (cells at the same Chebyshev
    radius), one eighth of the ring per step. This is a bijection on offsets,
    keeps the Chebyshev radius, and equals the exact rotation for multiples
    of 90 degrees.
    """

    dx, dy = offset
    r = max(abs(dx), abs(dy))
    if r == 0 or steps % 8 == 0:
        return (dx, dy)

    if dx == r and dy >= 0:
        p = dy
    elif dy == r:
        p = r + (r - dx)
    elif dx == -r:
        p = 3 * r + (r - dy)
    elif dy == -r:
        p = 5 * r + (dx + r)
    else:
        p = 7 * r + (dy + r)

    p = (p + steps * r) % (8 * r)

    if p <= r:
        return (r, p)
    if p <= 3 * r:
        return (r - (p - r), r)
    if p <= 5 * r:
        return (-r, r - (p - 3 * r))
    if p <= 7 * r:
        return ((p - 5 * r) - r, -r)
    return (r, (p - 7 * r) - r)


class CellSet:
    """Immutable membership set over the cells of one GridDims.

    Backed by a read-only boolean array of shape (height, width). Set algebra
    is only defined between sets of the same dims.
    """

    __slots__ = ('dims', '_mask', '_hash')

    def __init__(self, dims, mask=None):
        self.dims = dims
        if mask is None:
            mask = np.zeros(dims.shape, dtype=bool)
        else:
            mask = np.array(mask, dtype=bool, copy=True)
            if mask.shape != dims.shape:
                raise ValueError(f'Mask shape {mask.shape} does not match {dims}')
        mask.flags.writeable = False
        self._mask = mask
        self._hash = None

    @classmethod
    def _wrap(cls, dims, mask):
        """Take ownership of a freshly computed mask without copying"""
        obj = cls.__new__(cls)
        mask.flags.writeable = False
        obj.dims = dims
        obj._mask = mask
        obj._hash = None
        return obj

    @classmethod
    def empty(cls, dims):
        return cls(dims)

    @classmethod
    def full(cls, dims):
        return cls(dims, np.ones(dims.shape, dtype=bool))

    @classmethod
    def from_cells(cls, dims, cells: Iterable):
        mask = np.zeros(dims.shape, dtype=bool)
        for x, y in cells:
            if not dims.contains(x, y):
                raise ValueError(f'Cell ({x}, {y}) is outside the {dims} grid')
            mask[y, x] = True
        return cls(dims, mask)

    @classmethod
    def from_flat(cls, dims, flat_mask):
        return cls(dims, np.asarray(flat_mask, dtype=bool).reshape(dims.shape))

    @property
    def mask(self):
        """Read-only (height, width) boolean array"""
        return self._mask

    @property
    def flat(self):
        return self._mask.reshape(-1)

    def _check(self, other):
        if not isinstance(other, CellSet):
            raise TypeError(f"Expected a CellSet, got {type(other).__name__}")
        if other.dims.shape != self.dims.shape:
            raise ValueError(f'Cannot combine cell sets over {self.dims} and {other.dims}')
        return other

    def __or__(self, other):
        self._check(other)
        return CellSet._wrap(self.dims, self._mask | other._mask)

    def __and__(self, other):
        self._check(other)
        return CellSet._wrap(self.dims, self._mask & other._mask)

    def __sub__(self, other):
        self._check(other)
        return CellSet._wrap(self.dims, self._mask & ~other._mask)

    def __invert__(self):
        return CellSet._wrap(self.dims, ~self._mask)

    def complement(self):
        return ~self

    def __contains__(self, cell):
        x, y = cell
        return self.dims.contains(x, y) and bool(self._mask[y, x])

    def __len__(self):
        return int(np.count_nonzero(self._mask))

    def __bool__(self):
        return bool(self._mask.any())

    def __iter__(self) -> Iterator[Cell]:
        ys, xs = np.nonzero(self._mask)
        for x, y in zip(xs.tolist(), ys.tolist()):
            yield Cell(x, y)

    def cells(self):
        """Cells in row-major order"""
        return list(self)

    def isdisjoint(self, other):
        self._check(other)
        return not (self._mask & other._mask).any()

    def issubset(self, other):
        self._check(other)
        return not (self._mask & ~other._mask).any()

    def __le__(self, other):
        return self.issubset(other)

    def __eq__(self, other):
        if not isinstance(other, CellSet):
            return NotImplemented
        return self.dims.shape == other.dims.shape and np.array_equal(self._mask, other._mask)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dims.shape, np.packbits(self._mask).tobytes()))
        return self._hash

    def digest_bytes(self):
        return np.packbits(self._mask).tobytes()

    def bits(self):
        """Membership as an integer bitset; bit i is row-major cell i"""
        return int.from_bytes(np.packbits(self.flat, bitorder='little').tobytes(), 'little')

    @classmethod
    def from_bits(cls, dims, bits):
        raw = np.frombuffer(bits.to_bytes((dims.size + 7) // 8, 'little'), dtype=np.uint8)
        flat = np.unpackbits(raw, count=dims.size, bitorder='little').astype(bool)
        return cls._wrap(dims, flat.reshape(dims.shape))

    def __repr__(self):
        return f'CellSet({self.dims}, {len(self)} cells)'


class Grid2:
    """Dense 2D lattice with one payload per cell.

    `cells` is a numpy array of shape (height, width); row-major flattening
    gives the canonical cell order. A Grid2 is frozen on construction; use
    `builder()` for a writable copy and `Grid2(dims, array)` to freeze it
    again.
    """

    def __init__(self, dims, cells):
        cells = np.array(cells, copy=True)
        if cells.shape != dims.shape:
            raise ValueError(f'Payload shape {cells.shape} does not match {dims}')
        cells.flags.writeable = False
        self.dims = dims
        self.cells = cells

    @classmethod
    def filled(cls, dims, value, dtype=None):
        return cls(dims, np.full(dims.shape, value, dtype=dtype))

    def __getitem__(self, cell):
        x, y = cell
        if not self.dims.contains(x, y):
            raise ValueError(f'Cell ({x}, {y}) is outside the {self.dims} grid')
        return self.cells[y, x]

    def builder(self):
        """Writable copy of the payload array"""
        return np.array(self.cells, copy=True)

    def where(self, value):
        return CellSet(self.dims, self.cells == value)

    def to_ascii(self, charmap):
        """Render as text, one character per cell, top row (y = height - 1) first.

        Parameters
        ----------
        charmap : dict
            payload value -> single character
        """

        lines = []
        for y in range(self.dims.height - 1, -1, -1):
            lines.append(''.join(charmap[v] for v in self.cells[y].tolist()))
        return '\n'.join(lines)

    @classmethod
    def from_ascii(cls, text, charmap, resolution=0.1):
        """Inverse of `to_ascii`; `charmap` maps characters to payloads"""

        rows = [line for line in text.splitlines() if line]
        if not rows:
            raise ValueError('Empty ASCII grid')
        width = len(rows[0])
        for n, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f'ASCII grid row {n} has {len(row)} characters, expected {width}')
        dims = GridDims(width, len(rows), resolution)
        values = [[charmap[ch] for ch in row] for row in reversed(rows)]
        return cls(dims, np.array(values))

    def save_h5(self, group, name):
        """Write the payload as a dataset in an open h5py group"""

        dataset = group.create_dataset(name, data=self.cells)
        dataset.attrs['width'] = self.dims.width
        dataset.attrs['height'] = self.dims.height
        dataset.attrs['resolution'] = self.dims.resolution
        return dataset

    @classmethod
    def load_h5(cls, group, name):
        dataset = group[name]
        dims = GridDims(int(dataset.attrs['width']),
                        int(dataset.attrs['height']),
                        float(dataset.attrs['resolution']))
        return cls(dims, dataset[()])

    def save(self, path):
        """Versioned binary form (HDF5)"""

        with h5.File(path, 'w') as f:
            f.attrs['version'] = GRID_FORMAT_VERSION
            self.save_h5(f, 'cells')

    @classmethod
    def load(cls, path):
        with h5.File(path, 'r') as f:
            version = int(f.attrs.get('version', -1))
            if version != GRID_FORMAT_VERSION:
                raise ValueError(f'Unsupported grid file version {version} in {path}')
            return cls.load_h5(f, 'cells')

    def __eq__(self, other):
        if not isinstance(other, Grid2):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.cells, other.cells)

    def __str__(self):
        return f'Grid2 {self.dims} ({self.cells.dtype})'


class Footprint:
    """Cell offsets of a body relative to its anchor cell.

    Offsets are given for heading 0; the offsets for heading h are the
    ring rotation of the base offsets by h steps.
    """

    def __init__(self, offsets):
        offsets = tuple(sorted({(int(dx), int(dy)) for dx, dy in offsets}))
        if not offsets:
            raise ValueError('Footprint must contain at least one cell')
        if (0, 0) not in offsets:
            raise ValueError('Footprint must contain the anchor offset (0, 0)')
        self.offsets = offsets
        self._by_heading = tuple(tuple(ring_rotate(o, h) for o in offsets) for h in range(8))

    @classmethod
    def single(cls):
        return cls([(0, 0)])

    @classmethod
    def bar(cls, width):
        """Bar `width` cells wide, perpendicular to heading 0"""

        if width < 1 or width % 2 == 0:
            raise ValueError(f'Bar width must be odd and positive, got {width}')
        half = width // 2
        return cls([(0, dy) for dy in range(-half, half + 1)])

    @classmethod
    def rectangle(cls, width, height):
        return cls([(dx, dy) for dx in range(width) for dy in range(height)])

    def at(self, heading):
        return self._by_heading[heading % 8]

    def cells(self, anchor, heading):
        ax, ay = anchor
        return [Cell(ax + dx, ay + dy) for dx, dy in self._by_heading[heading % 8]]

    @property
    def bounding_box(self):
        xs = [dx for dx, _ in self.offsets]
        ys = [dy for _, dy in self.offsets]
        return (max(xs) - min(xs) + 1, max(ys) - min(ys) + 1)

    def __len__(self):
        return len(self.offsets)

    def __eq__(self, other):
        return isinstance(other, Footprint) and self.offsets == other.offsets

    def __hash__(self):
        return hash(self.offsets)

    def __repr__(self):
        return f'Footprint({list(self.offsets)})'
