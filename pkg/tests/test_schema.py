import json
from fractions import Fraction

import pytest
from jsonschema import ValidationError

from anosovlab import reports
from anosovlab.errors import InvalidInputError
from anosovlab.schema import REPORT_KINDS, get_schema, recursive_resolve, validate_report
from anosovlab.utils import RunConfig


def _config(subcommand, matrix="2,1;1,1", **overrides):
    values = dict(
        matrix=matrix,
        subcommand=subcommand,
        max_period=3,
        max_slope=2,
        brute_height=2,
        m0=1,
        format="json",
        threads=2,
        c0=Fraction(1),
        t0=1,
        kappa3=Fraction(1),
        tau=Fraction(1),
    )
    values.update(overrides)
    return RunConfig(**values)


def test_resolve_schema(tmp_path):
    base = "https://schemas.test/"
    schema_a = {
        "$id": base + "a.json",
        "$ref": "b.json#/$defs/user",
        "properties": {
            "gender": {"type": "string", "enum": ["male", "female", "other"]}
        },
    }
    schema_b = {
        "$id": base + "b.json",
        "$defs": {"user": {"$ref": "c.json#/$defs/user"}},
    }
    schema_c = {
        "$id": base + "c.json",
        "$defs": {
            "user": {
                "type": "object",
                "properties": {"name": {"type": "string"}, "age": {"type": "number"}},
            }
        },
    }
    for name, schema in (("a", schema_a), ("b", schema_b), ("c", schema_c)):
        (tmp_path / f"{name}.json").write_text(json.dumps(schema))

    schema = recursive_resolve("a", tmp_path)

    assert schema == {
        "$id": base + "a.json",
        "properties": {
            "gender": {"type": "string", "enum": ["male", "female", "other"]},
            "name": {"type": "string"},
            "age": {"type": "number"},
        },
        "type": "object",
    }


def test_packaged_schemas_resolve():
    for kind in REPORT_KINDS:
        resolved = recursive_resolve(kind)
        assert "$ref" not in json.dumps(resolved)
        assert {"tool", "matrix", "framing", "bounds"} <= set(resolved["required"])

    with pytest.raises(InvalidInputError, match="unknown report kind"):
        get_schema("common")
    with pytest.raises(InvalidInputError):
        recursive_resolve("census")


def test_reports_match_their_schemas():
    validate_report(reports.cmd_orbits(_config("orbits")), "orbits")
    validate_report(reports.cmd_orbits(_config("orbits"), counts_only=True), "orbits")
    validate_report(reports.cmd_reversible(_config("reversible")), "reversible")
    validate_report(reports.cmd_surgery(_config("surgery"), ["p1-i0,2", "p2-i0,-2"]), "surgery")
    validate_report(reports.cmd_loop_candidates(_config("loop-candidates", max_period=2, max_slope=1)), "loops")
    validate_report(reports.cmd_propb(_config("propb", max_period=6)), "propb")


def test_validation_rejects_broken_reports():
    report = reports.cmd_orbits(_config("orbits"))
    del report["census"]
    with pytest.raises(ValidationError):
        validate_report(report, "orbits")

    report = reports.cmd_orbits(_config("orbits"))
    report["matrix"] = "2,1;1,1"
    with pytest.raises(ValidationError):
        validate_report(report, "orbits")
