//! Hand-written JSON schemas of subcommand inputs and outputs.

use serde_json::{json, Value};

fn complex() -> Value {
    json!({ "type": "object", "properties": { "re": { "type": "number" }, "im": { "type": "number" } }, "required": ["re"] })
}

/// `Complex64` fields serialize as `[re, im]`.
fn pair() -> Value {
    json!({ "type": "array", "items": { "type": "number" }, "minItems": 2, "maxItems": 2 })
}

fn rational() -> Value {
    json!({ "type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$" })
}

fn vectors() -> Value {
    json!({ "type": "array", "items": { "type": "array", "items": rational() } })
}

fn basis() -> Value {
    json!({
        "oneOf": [
            {
                "type": "object",
                "properties": {
                    "mode": { "enum": ["free", "embedded"] },
                    "r": { "type": "integer", "minimum": 1 },
                    "generators": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "properties": {
                                "id": { "type": "integer" },
                                "value": { "type": "array", "items": { "type": "number" } },
                                "exact": { "type": ["array", "null"], "items": rational() },
                                "label": { "type": "string" }
                            },
                            "required": ["id", "value"]
                        }
                    }
                },
                "required": ["mode", "r", "generators"]
            },
            { "type": "object", "properties": { "preset": { "const": "naturals" } }, "required": ["preset"] },
            {
                "type": "object",
                "properties": { "preset": { "const": "log_integers" }, "x": { "type": "integer" } },
                "required": ["preset", "x"]
            }
        ]
    })
}

fn element() -> Value {
    let scalar = json!({ "oneOf": [{ "type": "number" }, rational()] });
    json!({
        "type": "object",
        "properties": {
            "basis": basis(),
            "coeffs": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "element": {
                            "type": "object",
                            "properties": {
                                "exponents": { "type": "object", "additionalProperties": { "type": "integer" } },
                                "coords": { "type": "array", "items": rational() }
                            }
                        },
                        "re": scalar,
                        "im": scalar
                    },
                    "required": ["element", "re"]
                }
            },
            "truncation": { "type": "number" }
        },
        "required": ["basis", "coeffs"]
    })
}

fn function_spec() -> Value {
    json!({
        "type": "object",
        "properties": {
            "system": {
                "oneOf": [
                    { "type": "object", "properties": { "kind": { "const": "rational" }, "x": { "type": "integer" } } },
                    {
                        "type": "object",
                        "properties": {
                            "kind": { "const": "beurling" },
                            "primes": { "type": "array", "items": { "type": "number" } },
                            "x": { "type": "number" }
                        }
                    }
                ]
            },
            "values": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": { "p": { "type": "number" }, "k": { "type": "integer", "minimum": 1 }, "value": rational() },
                    "required": ["p", "k", "value"]
                }
            },
            "default": { "enum": ["zero", "one", "mobius", "power"] }
        }
    })
}

fn error() -> Value {
    json!({
        "type": "object",
        "properties": {
            "error": {
                "type": "object",
                "properties": { "kind": { "type": "string" }, "message": { "type": "string" } }
            }
        }
    })
}

pub fn schema(command: &str) -> Value {
    let (inputs, output) = match command {
        "convolve" => (json!([element(), element()]), element()),
        "invert" => (
            json!([element()]),
            json!({ "type": "object", "properties": { "element": element(), "certificate": {
                "type": "object", "properties": { "q": { "type": "number" }, "terms": { "type": "integer" }, "tail_bound": { "type": "number" } } } } }),
        ),
        "eval" => (
            json!([element()]),
            json!({ "type": "object", "properties": { "value": pair(), "head": pair(), "tail": {
                "type": ["object", "null"], "properties": { "cutoff": { "type": "number" }, "bound": { "type": "number" } } } } }),
        ),
        "witness" => (
            json!([element()]),
            json!({ "type": "object", "properties": {
                "min_modulus": { "type": "number" }, "argmin": { "type": "array", "items": pair() },
                "samples": { "type": "integer" }, "disk": { "type": ["object", "null"] } } }),
        ),
        "compose" => (json!([element()]), json!({ "type": "object", "properties": { "element": element(), "certificate": { "type": "object" } } })),
        "separate" => (
            json!([vectors()]),
            json!({ "oneOf": [
                { "type": "object", "properties": { "result": { "const": "contains" }, "coeffs": { "type": "array", "items": rational() } } },
                { "type": "object", "properties": { "result": { "const": "separated" }, "rho": { "type": "array", "items": rational() } } }
            ] }),
        ),
        "dual" => (
            json!([vectors()]),
            json!({ "type": "object", "properties": {
                "cone": { "type": "object", "properties": { "dim": { "type": "integer" }, "generators": vectors() } },
                "lineality": vectors() } }),
        ),
        "extend-character" => (
            json!([{ "type": "object", "properties": { "gamma": vectors(), "psi": { "type": "array", "items": complex() } }, "required": ["gamma", "psi"] }]),
            json!({ "type": "object", "properties": {
                "basis": vectors(), "exponent_maps": { "type": "array", "items": { "type": "array", "items": { "type": "integer" } } },
                "phi": { "type": "array", "items": complex() }, "frame": vectors(), "zeta": { "type": "array", "items": rational() },
                "theta": { "type": "array", "items": rational() }, "c": { "type": "string" },
                "phase_status": { "enum": ["fitted", "heuristic"] }, "max_error": { "type": "number" } } }),
        ),
        "density-search" => (
            json!([element(), { "type": "object", "properties": {
                "values": { "type": "object", "additionalProperties": complex() },
                "provenance": { "type": "object", "properties": { "kind": { "enum": ["from_s", "explicit", "extended"] } } } } }]),
            json!({ "type": "object", "properties": {
                "s": complex(), "achieved_error": { "type": "number" }, "target_value": complex(),
                "gamma_used": { "type": "array" }, "tail_error": { "type": "number" }, "theta": { "type": "number" },
                "success": { "type": "boolean" }, "strategy": { "enum": ["from_s", "closed_form", "kronecker", "newton"] },
                "evaluations": { "type": "integer" } } }),
        ),
        "kronecker" => (
            json!([{ "type": "object", "properties": {
                "betas": { "type": "array", "items": { "type": "number" } }, "targets": { "type": "array", "items": complex() },
                "theta": { "type": "number" }, "budget": { "type": "integer" } } }]),
            json!({ "type": "object", "properties": {
                "t": { "type": "number" }, "errors": { "type": "array", "items": { "type": "number" } },
                "success": { "type": "boolean" }, "steps": { "type": "integer" } } }),
        ),
        "euler-invert" => (
            json!([function_spec()]),
            json!({ "type": "object", "properties": { "system": { "type": "object" }, "inverse": function_spec(), "certificate": { "type": "object" } } }),
        ),
        "p3-decompose" => (
            json!([function_spec()]),
            json!({ "type": "object", "properties": {
                "p0": { "type": ["number", "null"] }, "local": { "type": "array" }, "b": function_spec(), "h": function_spec(),
                "certificates": { "type": "object" } } }),
        ),
        _ => (
            json!([]),
            json!({ "type": "object", "properties": {
                "condition_a": { "type": "boolean" }, "condition_b": { "type": "object" },
                "submultiplicative": { "type": "boolean" }, "growth": { "type": "object" } } }),
        ),
    };
    json!({ "command": command, "inputs": inputs, "output": output, "error": error() })
}
