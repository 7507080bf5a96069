import json
import math

import numpy as np


def to_plain(obj):
    # numpy scalars, tuples and non-finite floats -> JSON-safe values
    if isinstance(obj, dict):
        return {str(k): to_plain(obj[k]) for k in obj}
    if isinstance(obj, (list, tuple)):
        return [to_plain(o) for o in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(o) for o in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    return obj


def dumps(obj):
    return json.dumps(to_plain(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    with open(path, "w") as fout:
        fout.write(dumps(obj))
