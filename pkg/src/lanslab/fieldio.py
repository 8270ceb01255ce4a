"""Field snapshot files: one JSON header line, then raw samples.

Layout: the first line is a JSON object terminated by a newline with keys
{format, version, n, N, components, dtype, order} (dtype "<f8" =
little-endian float64, order "C" = row-major, component index slowest);
the payload is components * N^n float64 values.  Files round-trip exactly.
"""

import json

import numpy as np

from .fields import VectorField
from .grid import Grid

_FORMAT = "lans-field"
_VERSION = 1


def write_field(path, f, field_id=None):
    header = {
        "format": _FORMAT,
        "version": _VERSION,
        "n": f.grid.n,
        "N": f.grid.N,
        "components": f.ncomp,
        "dtype": "<f8",
        "order": "C",
    }
    if field_id is not None:
        header["field_id"] = str(field_id)
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("ascii") + b"\n")
        fh.write(np.ascontiguousarray(f.data, dtype="<f8").tobytes())


def read_field(path):
    with open(path, "rb") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line.decode("ascii"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ValueError(f"{path}: not a field snapshot ({exc})") from exc
        if header.get("format") != _FORMAT:
            raise ValueError(f"{path}: unexpected format {header.get('format')!r}")
        grid = Grid(int(header["n"]), int(header["N"]))
        ncomp = int(header["components"])
        count = ncomp * grid.npoints
        payload = np.frombuffer(fh.read(count * 8), dtype="<f8", count=count)
    data = payload.reshape((ncomp,) + grid.shape)
    return VectorField(grid, data.astype(np.float64))
