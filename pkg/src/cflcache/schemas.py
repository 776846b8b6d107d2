"""JSON Schemas (draft 2020-12) for the CLI's ``--format json`` output."""

_INT = {"type": "integer"}
_NONNEG = {"type": "integer", "minimum": 0}
_FRAC = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_DEMAND = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}
_PARAMS = {
    "type": "object",
    "properties": {"N": _INT, "K": _INT, "M": _FRAC, "n_cfl": _INT},
    "required": ["N", "K"],
}
_CODE = {
    "type": "object",
    "properties": {
        "n": _INT, "k": _INT, "d": _INT,
        "origin": {"enum": ["identity", "worked_example", "user_table", "repetition",
                            "shortened_hamming", "repetition_concat"]},
        "optimal": {"type": "boolean"},
    },
    "required": ["n", "k", "d", "origin", "optimal"],
    "additionalProperties": False,
}

RATES = {
    "type": "object",
    "properties": {
        "params": _PARAMS,
        "delta": _NONNEG,
        "table": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "Ne": _INT, "prob": _FRAC, "kappa": _INT, "code_n": _INT,
                    "code_origin": {"type": "string"},
                    "label": {"enum": ["optimal", "achievable (constructive)"]},
                    "rate": _FRAC,
                },
                "required": ["Ne", "prob", "kappa", "code_n", "code_origin", "label", "rate"],
                "additionalProperties": False,
            },
        },
        "average_rate": _FRAC,
        "average_rate_decimal": {"type": "number"},
        "average_label": {"enum": ["exact", "upper bound"]},
        "peak_rate": _FRAC,
        "peak_rate_decimal": {"type": "number"},
        "peak_label": {"enum": ["exact", "upper bound"]},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["params", "delta", "table", "average_rate", "average_label",
                 "peak_rate", "peak_label", "notes"],
    "additionalProperties": False,
}

SCHEDULE = {
    "type": "object",
    "properties": {
        "params": _PARAMS,
        "demand": _DEMAND,
        "code": _CODE,
        "delta": _NONNEG,
        "transmissions": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "label": {"type": "string"},
                    "support": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                },
                "required": ["label", "support"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["params", "demand", "code", "delta", "transmissions"],
    "additionalProperties": False,
}

VERIFY = {
    "type": "object",
    "properties": {
        "params": _PARAMS,
        "demands": _NONNEG,
        "failed": _NONNEG,
        "trials": _NONNEG,
        "seed": _INT,
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "demand": _DEMAND,
                    "ne": _INT,
                    "kappa": _INT,
                    "dim_S": _INT,
                    "constraints_independent": {"type": "boolean"},
                    "subspace_check": {"type": "string"},
                    "subspace_in_A": {"type": "boolean"},
                    "kappa_bruteforce": _INT,
                    "alpha_below_kappa_plus_1": {"type": "boolean"},
                    "schedule_length": _INT,
                    "decodable": {"type": "boolean"},
                    "undecodable": {"type": "array", "items": _INT},
                    "ok": {"type": "boolean"},
                },
                "required": ["demand", "ne", "kappa", "dim_S", "constraints_independent",
                             "subspace_check", "subspace_in_A", "schedule_length",
                             "decodable", "ok"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["params", "demands", "failed", "trials", "seed", "results"],
    "additionalProperties": False,
}

SIMULATE = {
    "type": "object",
    "properties": {
        "params": _PARAMS,
        "demand": _DEMAND,
        "delta": _NONNEG,
        "code": _CODE,
        "bits": {"type": "integer", "minimum": 1},
        "trials": _NONNEG,
        "seed": _INT,
        "exhaustive": {"type": "boolean"},
        "exhaustive_patterns": _NONNEG,
        "per_user_success": {"type": "array", "items": _NONNEG},
        "per_user_exhaustive_success": {"type": "array", "items": _NONNEG},
    },
    "required": ["params", "demand", "delta", "code", "bits", "trials", "seed", "exhaustive",
                 "exhaustive_patterns", "per_user_success", "per_user_exhaustive_success"],
    "additionalProperties": False,
}

SCHEMAS = {"rates": RATES, "schedule": SCHEDULE, "verify": VERIFY, "simulate": SIMULATE}
