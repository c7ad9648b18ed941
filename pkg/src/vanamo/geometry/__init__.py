from .grid import Cell, GridDims, CellSet, Grid2, Footprint, ring_rotate
from .raycast import raycast, RayResult, visible_cells, fan_angles, HEADING_VECTORS, STATIC, MOVABLE
from .fields import ScalarField, distance_field, UNREACHABLE
from .sweep import swept_cells, incremental_sweep
