"""Input loading: ROI-by-time CSV tables, cohort manifests, uncompressed
NIfTI-1 volumes with binary ROI masks, and the ROI catalog.

Only the little-endian single-file NIfTI-1 layout with float32 or int16
voxels is accepted; anything else fails loudly rather than guessing.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    BadMagic,
    DimMismatch,
    DuplicateSubject,
    EmptyMask,
    EmptyTable,
    MalformedCsv,
    MissingFile,
    NonFiniteInput,
    TruncatedData,
    UnknownLabel,
    UnsupportedDatatype,
)

LABELS = ("HC", "AD")
HEADER_SIZE = 348
MAGIC_SINGLE = b"n+1\x00"
# NIfTI datatype codes
DT_INT16 = 4
DT_FLOAT32 = 16
_DTYPES = {DT_INT16: np.dtype("<i2"), DT_FLOAT32: np.dtype("<f4")}


# ---------------------------------------------------------------------------
# ROI time-series tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RoiTimeSeriesTable:
    subject_id: str
    roi_names: tuple[str, ...]
    data: np.ndarray  # (timepoints, n_rois) float64

    @property
    def n_timepoints(self) -> int:
        return int(self.data.shape[0])

    def series(self, roi_name: str) -> np.ndarray:
        return self.data[:, self.roi_names.index(roi_name)]


def parse_roi_csv(path, subject_id: str | None = None) -> RoiTimeSeriesTable:
    """Header row of ROI names, one row per time point, comma separated."""
    p = Path(path)
    if not p.exists():
        raise MissingFile(str(p))
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyTable(f"{p}: no header row") from None
        names = [h.strip() for h in header]
        if any(not n for n in names):
            raise MalformedCsv(f"{p}: empty ROI name in header")
        if len(set(names)) != len(names):
            raise MalformedCsv(f"{p}: duplicate ROI name in header")
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(names):
                raise MalformedCsv(
                    f"{p}: row {lineno} has {len(row)} cells, expected {len(names)}")
            try:
                values = [float(c) for c in row]
            except ValueError:
                raise MalformedCsv(f"{p}: non-numeric cell in row {lineno}") from None
            if not all(np.isfinite(v) for v in values):
                raise MalformedCsv(f"{p}: non-finite cell in row {lineno}")
            rows.append(values)
    if not rows:
        raise EmptyTable(f"{p}: no data rows")
    data = np.asarray(rows, dtype=np.float64)
    return RoiTimeSeriesTable(subject_id=subject_id or p.stem,
                              roi_names=tuple(names), data=data)


def write_roi_csv(table: RoiTimeSeriesTable, path) -> None:
    """Inverse of parse_roi_csv; floats use shortest round-trip formatting."""
    p = Path(path)
    with p.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(table.roi_names)
        for row in table.data:
            writer.writerow([repr(float(v)) for v in row])


# ---------------------------------------------------------------------------
# cohort manifests
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ManifestEntry:
    subject_id: str
    label: str
    path: Path


@dataclass(frozen=True)
class CohortManifest:
    entries: tuple[ManifestEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def labels(self) -> dict[str, str]:
        return {e.subject_id: e.label for e in self.entries}


def parse_manifest(path) -> CohortManifest:
    """CSV with columns subject_id,label,path; labels are HC or AD.

    Relative table paths resolve against the manifest's directory; missing
    files are rejected at parse time.
    """
    p = Path(path)
    if not p.exists():
        raise MissingFile(str(p))
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyTable(f"{p}: empty manifest") from None
        if header != ["subject_id", "label", "path"]:
            raise MalformedCsv(
                f"{p}: header must be subject_id,label,path, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise MalformedCsv(f"{p}: row {lineno} needs 3 cells")
            sid, label, rel = (c.strip() for c in row)
            if label not in LABELS:
                raise UnknownLabel(f"{p}: row {lineno}: label {label!r}")
            if sid in seen:
                raise DuplicateSubject(f"{p}: duplicate subject_id {sid!r}")
            seen.add(sid)
            target = Path(rel)
            if not target.is_absolute():
                target = p.parent / target
            if not target.exists():
                raise MissingFile(f"{p}: row {lineno}: {target}")
            entries.append(ManifestEntry(subject_id=sid, label=label, path=target))
    if not entries:
        raise EmptyTable(f"{p}: manifest has no entries")
    return CohortManifest(entries=tuple(entries))


# ---------------------------------------------------------------------------
# NIfTI-1 volumes and masks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NiftiVolume4D:
    data: np.ndarray  # (nx, ny, nz, nt) float64, scaling applied
    datatype: int
    scl_slope: float
    scl_inter: float
    vox_offset: int

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return tuple(int(d) for d in self.data.shape)  # type: ignore[return-value]


def read_nifti(path) -> NiftiVolume4D:
    """Read an uncompressed little-endian single-file NIfTI-1 volume."""
    p = Path(path)
    if not p.exists():
        raise MissingFile(str(p))
    raw = p.read_bytes()
    if len(raw) < HEADER_SIZE:
        raise TruncatedData(f"{p}: {len(raw)} bytes is shorter than the header")
    magic = raw[344:348]
    if magic != MAGIC_SINGLE:
        raise BadMagic(f"{p}: magic {magic!r}, expected {MAGIC_SINGLE!r}")
    dim = struct.unpack_from("<8h", raw, 40)
    ndim = dim[0]
    if ndim not in (3, 4):
        raise UnsupportedDatatype(f"{p}: dim[0]={ndim}, expected 3 or 4")
    nx, ny, nz = dim[1], dim[2], dim[3]
    nt = dim[4] if ndim == 4 else 1
    if min(nx, ny, nz, nt) < 1:
        raise TruncatedData(f"{p}: non-positive dimension in {dim[:5]}")
    (datatype,) = struct.unpack_from("<h", raw, 70)
    if datatype not in _DTYPES:
        raise UnsupportedDatatype(f"{p}: datatype code {datatype}")
    (vox_offset,) = struct.unpack_from("<f", raw, 108)
    (scl_slope,) = struct.unpack_from("<f", raw, 112)
    (scl_inter,) = struct.unpack_from("<f", raw, 116)
    offset = int(vox_offset)
    dtype = _DTYPES[datatype]
    count = nx * ny * nz * nt
    need = offset + count * dtype.itemsize
    if len(raw) < need:
        raise TruncatedData(f"{p}: need {need} bytes, file has {len(raw)}")
    flat = np.frombuffer(raw, dtype=dtype, count=count, offset=offset)
    data = flat.astype(np.float64).reshape((nx, ny, nz, nt), order="F")
    slope = float(scl_slope) if scl_slope != 0.0 else 1.0
    data = data * slope + float(scl_inter)
    return NiftiVolume4D(data=data, datatype=int(datatype),
                         scl_slope=float(scl_slope), scl_inter=float(scl_inter),
                         vox_offset=offset)


@dataclass(frozen=True)
class RoiMask:
    name: str
    voxels: np.ndarray  # boolean (nx, ny, nz)


def mask_from_volume(name: str, vol: NiftiVolume4D) -> RoiMask:
    """First volume of a NIfTI file as a boolean mask (non-zero = included)."""
    return RoiMask(name=name, voxels=vol.data[..., 0] != 0.0)


def extract_roi_means(vol: NiftiVolume4D,
                      masks: list[RoiMask],
                      subject_id: str = "subject") -> RoiTimeSeriesTable:
    """Mean voxel value under each mask, per time point."""
    nx, ny, nz, nt = vol.data.shape
    columns = []
    names = []
    for mask in masks:
        if mask.voxels.shape != (nx, ny, nz):
            raise DimMismatch(
                f"mask {mask.name!r} shape {mask.voxels.shape} != volume {(nx, ny, nz)}")
        if not mask.voxels.any():
            raise EmptyMask(f"mask {mask.name!r} selects no voxels")
        columns.append(vol.data[mask.voxels, :].mean(axis=0))
        names.append(mask.name)
    data = np.column_stack(columns)
    if not np.all(np.isfinite(data)):
        raise NonFiniteInput("extracted series contain non-finite values")
    return RoiTimeSeriesTable(subject_id=subject_id, roi_names=tuple(names),
                              data=data)


# ---------------------------------------------------------------------------
# ROI catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RoiCatalog:
    """ROI names with optional hemispheric pairings (symmetric)."""

    pairings: dict[str, str | None]

    def __post_init__(self):
        for name, partner in self.pairings.items():
            if partner is None:
                continue
            if self.pairings.get(partner) != name:
                raise MalformedCsv(
                    f"catalog pairing {name!r} -> {partner!r} is not symmetric")

    @property
    def roi_names(self) -> tuple[str, ...]:
        return tuple(self.pairings)

    def pairs(self) -> list[tuple[str, str]]:
        """Each symmetric pair once, in first-appearance order."""
        out = []
        seen = set()
        for name, partner in self.pairings.items():
            if partner is not None and name not in seen:
                out.append((name, partner))
                seen.add(name)
                seen.add(partner)
        return out


def parse_roi_catalog(path) -> RoiCatalog:
    """CSV with columns roi_name,paired_with (paired_with may be empty)."""
    p = Path(path)
    if not p.exists():
        raise MissingFile(str(p))
    pairings: dict[str, str | None] = {}
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        if header != ["roi_name", "paired_with"]:
            raise MalformedCsv(f"{p}: header must be roi_name,paired_with")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise MalformedCsv(f"{p}: row {lineno} needs 2 cells")
            name = row[0].strip()
            partner = row[1].strip() or None
            if not name:
                raise MalformedCsv(f"{p}: row {lineno}: empty roi_name")
            if name in pairings:
                raise MalformedCsv(f"{p}: duplicate roi_name {name!r}")
            pairings[name] = partner
    if not pairings:
        raise EmptyTable(f"{p}: catalog has no rows")
    return RoiCatalog(pairings=pairings)


def default_roi_catalog() -> RoiCatalog:
    """The catalog shipped with the package (extend via your own CSV)."""
    with resources.as_file(
            resources.files("dsmeasure").joinpath("data/default_roi_catalog.csv")) as p:
        return parse_roi_catalog(p)
