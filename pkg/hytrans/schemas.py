__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

## Molecule and run configuration schemas

schema_url = "http://json-schema.org/draft-07/schema"

# Molecule

nucleusProperties = {
    "type": "object",
    "properties": {
        "label": {"type": "string", "minLength": 1},
        "species": {"type": "string", "minLength": 1},
        "gamma_hz_per_tesla": {"type": "number"},
        "shift_hz": {"type": "number"},
        "role": {"enum": ["hydrogen", "target", "other"]},
    },
    "required": ["label", "species", "role"],
    "additionalProperties": False,
}

couplingProperties = {
    "type": "object",
    "properties": {
        "a": {"type": "string"},
        "b": {"type": "string"},
        "j_hz": {"type": "number"},
    },
    "required": ["a", "b", "j_hz"],
    "additionalProperties": False,
}

t2Properties = {
    "type": "object",
    "properties": {
        "t2_s": {"type": "number", "exclusiveMinimum": 0},
        "t2_star_s": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["t2_s"],
    "additionalProperties": False,
}

environmentProperties = {
    "type": "object",
    "properties": {
        "b_tesla": {"type": "number", "exclusiveMinimum": 0},
        "temperature_k": {"type": "number", "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}

moleculeProperties = {
    "name": {"type": "string"},
    "nuclei": {"type": "array", "items": nucleusProperties, "minItems": 1},
    "couplings": {"type": "array", "items": couplingProperties},
    "t2": {"type": "object", "additionalProperties": t2Properties},
    "environment": environmentProperties,
}

molecule = {
    "$schema": schema_url,
    "title": "Molecule Schema",
    "type": "object",
    "required": ["nuclei"],
    "properties": moleculeProperties,
    "additionalProperties": False,
}


# Run configuration

sequenceProperties = {
    "type": "object",
    "properties": {
        "t_s": {"type": "number", "exclusiveMinimum": 0},
        "tau_s": {"type": "number", "exclusiveMinimum": 0},
        "n": {"type": "integer", "minimum": 1},
        "m": {"type": "integer", "minimum": 1},
        "m1": {"type": "integer", "minimum": 1},
        "t_rf_s": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "pi_pulses": {"type": "boolean"},
        "mode": {"enum": ["effective", "explicit"]},
        "target": {"type": ["string", "null"]},
    },
    "additionalProperties": False,
}

readoutProperties = {
    "type": "object",
    "properties": {
        "omega_hz": {"type": "number", "exclusiveMinimum": 0},
        "t2_nv_s": {"type": "number", "exclusiveMinimum": 0},
        "contrast": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "t_exp_s": {"type": "number", "exclusiveMinimum": 0},
        "rho_h_per_m3": {"type": "number", "exclusiveMinimum": 0},
        "f3": {"type": "number"},
        "gamma_h_hz_per_tesla": {"type": "number"},
        "shot_noise": {"type": "number", "minimum": 0},
        "rotation_periods": {"type": "integer", "minimum": 1},
        "dead_time_s": {"type": "number", "minimum": 0},
        "samples_per_period": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

sensitivityProperties = {
    "type": "object",
    "properties": {
        "m_max": {"type": "integer", "minimum": 1},
        "seeds": {"type": "integer", "minimum": 0},
        "workers": {"type": "integer", "minimum": 1},
        "sweep_t2nv": {"type": ["string", "null"]},
    },
    "additionalProperties": False,
}

runConfigProperties = {
    "molecule": {"type": "string"},
    "sequence": sequenceProperties,
    "readout": readoutProperties,
    "sensitivity": sensitivityProperties,
    "output": {"type": ["string", "null"]},
    "seed": {"type": "integer", "minimum": 0},
}

run_config = {
    "$schema": schema_url,
    "title": "Run Configuration Schema",
    "type": "object",
    "required": ["molecule"],
    "properties": runConfigProperties,
    "additionalProperties": False,
}
