"""Report assembly for the command-line tool.

Each ``cmd_*`` function turns a :class:`RunConfig` into a plain dict with a
fixed key order; :func:`render` validates it against its schema and writes
it as JSON, TSV or DOT.
"""

import json
from itertools import combinations
from typing import List, Optional, Sequence

from anosovlab import jinja, settings
from anosovlab.birkhoff import (
    section_after_surgery,
    same_entries,
    theorem_a_paths,
    theorem_a_prime_data,
    validate,
)
from anosovlab.conjugacy import (
    brute_force_conjugator,
    gl2_word_class,
    inverse_word,
    is_palindromic_class,
    is_reversible,
    rl_decompose,
)
from anosovlab.errors import InvalidInputError, SurgeryLocusError
from anosovlab.linalg import Hyperbolic2
from anosovlab.schema import validate_report
from anosovlab.stats import (
    BOUND_NOTE,
    PropBParams,
    density_ratio,
    geometric_period,
    growth_rate,
    period_comparison_identity,
)
from anosovlab.surgery import (
    SurgeryMove,
    SurgeryPath,
    h1_complement,
    orbit_transport,
    suspension_fingerprint_check,
)
from anosovlab.suspension import SuspensionFlow, build_suspension, orbit_class, reverse
from anosovlab.torus import OrbitCatalog, census, enumeration_cost
from anosovlab.utils import RunConfig, parallel_map, parse_matrix, parse_move, parse_orbit_id

VERDICT_REVERSIBLE = "reversible"
VERDICT_NO_WITNESS = "no witness (word classes differ)"

UNDECIDED_TARGET_NOTE = (
    "A is not reversible: a surgered flow that is a suspension again is conjugate "
    "to the suspension of either A or A^-1, and this tool cannot decide which"
)

DOT_KINDS = ("surgery", "loops")


def header(config: RunConfig, matrix: Hyperbolic2) -> dict:
    """Fields shared by every report: tool, command, matrix, framing and bounds."""
    return {
        "tool": {"name": settings.TOOL_NAME, "version": settings.VERSION},
        "command": config.subcommand,
        "matrix": matrix.to_rows(),
        "framing": {"convention": settings.FRAMING_CONVENTION, "note": settings.FRAMING_DISCLAIMER},
        "bounds": config.bounds,
    }


def _target_classes(matrix: Hyperbolic2) -> dict:
    word = rl_decompose(matrix)
    return {
        "classes": [str(word), str(inverse_word(word))],
        "note": UNDECIDED_TARGET_NOTE,
    }


def cmd_orbits(config: RunConfig, counts_only: bool = False) -> dict:
    """
    Periodic orbit census of ``A`` up to ``config.max_period``.

    Args:
        config (RunConfig): The resolved configuration.
        counts_only (bool): Leave out the orbit list.

    Returns:
        dict: Census rows and, unless ``counts_only``, every orbit with its id.
    """

    matrix = parse_matrix(config.matrix)
    result = census(matrix, config.max_period, config.threads)
    report = header(config, matrix)
    report["census"] = {
        "max_period": result.max_period,
        "cumulative": result.cumulative,
        "rows": result.rows(),
    }
    if counts_only:
        report["orbits"] = None
    else:
        if enumeration_cost(matrix, config.max_period) > settings.MAX_ENUMERATED_POINTS:
            raise InvalidInputError(
                f"too many periodic points to list up to period {config.max_period}; "
                "use --counts-only for the census alone"
            )
        catalog = OrbitCatalog(matrix, config.max_period, config.threads)
        report["orbits"] = [orbit.to_dict() for orbit in catalog]
    return report


def cmd_reversible(config: RunConfig) -> dict:
    """
    Decide whether ``A`` is conjugate to ``A^-1`` in GL(2,Z).

    The word decision is cross-checked by a brute-force search at height
    ``config.brute_height``; the reversed flow is reported with its census
    and the orbit correspondence up to ``config.max_period``.
    """

    matrix = parse_matrix(config.matrix)
    witness = is_reversible(matrix)
    word = rl_decompose(matrix)
    brute = brute_force_conjugator(
        matrix.m, matrix.inverse().m, config.brute_height, "GL", config.threads
    )

    flow = build_suspension(matrix)
    reversal = reverse(flow)
    report = header(config, matrix)
    report.update(
        {
            "reversible": witness is not None,
            "verdict": VERDICT_REVERSIBLE if witness is not None else VERDICT_NO_WITNESS,
            "witness": None
            if witness is None
            else dict(witness.to_dict(), verified=witness.verifies(matrix.m, matrix.inverse().m)),
            "word": str(word),
            "word_blocks": word.to_list(),
            "inverse_word": str(inverse_word(word)),
            "gl2_class": [str(w) for w in gl2_word_class(word)],
            "palindromic_class": is_palindromic_class(word),
            "brute_force": {
                "height": config.brute_height,
                "witness": None if brute is None else brute.to_dict(),
            },
            "candidate_targets": None if witness is not None else _target_classes(matrix),
            "reverse": {
                "matrix": reversal.target.matrix.to_rows(),
                "word": str(reversal.word),
                "conjugator": reversal.conjugator.to_rows(),
                "census": reversal.census(config.max_period, config.threads).rows(),
                "correspondence": [
                    {"orbit": source.orbit_id, "reversed": target.orbit_id}
                    for source, target in reversal.correspondence(config.max_period, config.threads)
                ],
            },
        }
    )
    return report


def _theorem_a_block(flow: SuspensionFlow, path: SurgeryPath, m0: int) -> Optional[dict]:
    slopes = path.slopes
    if len(path.moves) != 2 or slopes[0] == 0 or slopes[0] != -slopes[1]:
        return None
    gamma, alpha = path.orbits
    m = slopes[0]
    forward, _ = theorem_a_paths(flow, gamma, alpha, m)
    data = theorem_a_prime_data(alpha, gamma, m, m0)
    return {
        "loop": forward.to_dict(),
        "data": data.to_dict(),
        "validation": validate(data, flow).to_dict(),
        "section_matches": same_entries(forward.section(), data),
    }


def cmd_surgery(config: RunConfig, moves: Sequence[str], seed: int = 0) -> dict:
    """
    First homology after integral surgeries on orbits of the suspension.

    Args:
        config (RunConfig): The resolved configuration.
        moves (Sequence[str]): Moves written ``(pK-iJ, m)``.
        seed (int): First seed of the arc system draw.

    Returns:
        dict: Groups before and after surgery, the presentation, the
        fingerprint check, the carried section and, for a loop
        ``(gamma, m), (alpha, -m)``, its Birkhoff validation.

    Raises:
        UnknownOrbitError: If a move names an orbit that does not exist.
    """

    if not moves:
        raise InvalidInputError("surgery needs at least one --move")
    parsed = [parse_move(text) for text in moves]
    if seed < 0:
        raise InvalidInputError(f"seed must be non-negative, got {seed}")

    matrix = parse_matrix(config.matrix)
    flow = build_suspension(matrix)
    horizon = max([config.max_period] + [parse_orbit_id(orbit_id)[0] for orbit_id, _ in parsed])
    catalog = flow.catalog(horizon, config.threads)
    path = SurgeryPath(flow, tuple(SurgeryMove(catalog.get(orbit_id), m) for orbit_id, m in parsed))

    complement, presentation = h1_complement(flow, path.orbits, seed)
    surgered = presentation.surgered(path.slopes)

    transported = []
    for orbit in catalog:
        if orbit.period > config.max_period:
            continue
        try:
            entry = orbit_transport(path, orbit).to_dict()
        except SurgeryLocusError as exc:
            transported.append({"token": exc.core.token, "orbit": orbit.orbit_id, "pairing": None})
            continue
        entry["geometric_period"] = str(geometric_period(orbit, config.tau))
        entry["period_identity"] = period_comparison_identity(path, orbit)
        transported.append(entry)

    report = header(config, matrix)
    report.update(
        {
            "moves": [move.to_dict() for move in path.moves],
            "path": path.label,
            "orbits": [
                dict(orbit.to_dict(), homology=orbit_class(flow, orbit).to_dict()) for orbit in path.orbits
            ],
            "h1": {
                "base": flow.h1.to_dict(),
                "complement": complement.to_dict(),
                "surgered": surgered.to_dict(),
            },
            "fingerprint": {
                "match": suspension_fingerprint_check(surgered, flow),
                "caveat": settings.FINGERPRINT_CAVEAT,
            },
            "presentation": presentation.to_dict(),
            "section": section_after_surgery(path).to_dict(),
            "transported": transported,
            "theorem_a": _theorem_a_block(flow, path, config.m0),
        }
    )
    return report


def _loops_of_pair(flow: SuspensionFlow, gamma, alpha, max_slope: int, m0: int) -> List[dict]:
    _, presentation = h1_complement(flow, [gamma, alpha])
    out = []
    for m in [s for s in range(-max_slope, max_slope + 1) if s != 0]:
        path = SurgeryPath(flow, (SurgeryMove(gamma, m), SurgeryMove(alpha, -m)))
        data = theorem_a_prime_data(alpha, gamma, m, m0)
        validation = validate(data, flow)
        h1 = presentation.surgered([m, -m])
        out.append(
            {
                "gamma": gamma.orbit_id,
                "alpha": alpha.orbit_id,
                "m": m,
                "path": path.label,
                "label": data.label,
                "h1": h1.to_dict(),
                "birkhoff": validation.passed,
                "excluded_from_candidacy": validation.fiber_ok and not validation.horizontal_ok,
                "fingerprint_match": suspension_fingerprint_check(h1, flow),
                "validation": validation.to_dict(),
            }
        )
    return out


def cmd_loop_candidates(config: RunConfig) -> dict:
    """
    Length-two surgery loops ``(gamma, m), (alpha, -m)`` passing the necessary conditions.

    Every unordered pair of distinct orbits with period at most
    ``config.max_period`` is tried with ``0 < |m| <= config.max_slope``. A
    loop is a candidate when its section data passes :func:`validate` and
    the surgered ``H1`` equals ``H1(M_A)``. Pairs are swept in parallel and
    the results kept in sweep order.
    """

    matrix = parse_matrix(config.matrix)
    flow = build_suspension(matrix)
    witness = is_reversible(matrix)
    orbits = list(flow.catalog(config.max_period, config.threads))

    pairs = list(combinations(orbits, 2)) if config.max_slope > 0 else []
    swept = parallel_map(
        lambda pair: _loops_of_pair(flow, pair[0], pair[1], config.max_slope, config.m0),
        pairs,
        config.threads,
    )
    loops = [loop for pair_loops in swept for loop in pair_loops]
    birkhoff_valid = [loop for loop in loops if loop["birkhoff"]]
    candidates = [loop for loop in birkhoff_valid if loop["fingerprint_match"]]

    histogram = {}
    for loop in birkhoff_valid:
        histogram[loop["h1"]["label"]] = histogram.get(loop["h1"]["label"], 0) + 1

    report = header(config, matrix)
    report.update(
        {
            "reversible": witness is not None,
            "candidate_targets": None if witness is not None else _target_classes(matrix),
            "base_h1": flow.h1.to_dict(),
            "summary": {
                "orbits": len(orbits),
                "tested": len(loops),
                "birkhoff_valid": len(birkhoff_valid),
                "excluded_from_candidacy": sum(loop["excluded_from_candidacy"] for loop in loops),
                "candidates": len(candidates),
            },
            "caveat": settings.CANDIDATE_CAVEAT,
            "candidates": [
                {
                    "gamma": loop["gamma"],
                    "alpha": loop["alpha"],
                    "m": loop["m"],
                    "path": loop["path"],
                    "label": loop["label"],
                    "status": settings.CANDIDATE_CAVEAT,
                    "h1": loop["h1"],
                    "validation": loop["validation"],
                }
                for loop in candidates
            ],
            "loops": [
                {
                    "path": loop["path"],
                    "h1": loop["h1"]["label"],
                    "candidate": loop["fingerprint_match"],
                }
                for loop in birkhoff_valid
            ],
            "fingerprints": [{"h1": label, "count": histogram[label]} for label in sorted(histogram)],
        }
    )
    return report


def _decreasing_from(ratios: List) -> Optional[int]:
    """Smallest ``t`` from which the ratio column strictly decreases to the end."""
    if not ratios:
        return None
    start = ratios[-1].t
    for previous, row in zip(reversed(ratios[:-1]), reversed(ratios)):
        if previous.ratio <= row.ratio:
            break
        start = previous.t
    return start


def cmd_propb(config: RunConfig) -> dict:
    """Density bound table and growth comparison for the census of ``A``."""
    matrix = parse_matrix(config.matrix)
    params = PropBParams(c0=config.c0, t0=config.t0, kappa3=config.kappa3, tau=config.tau)
    result = census(matrix, config.max_period, config.threads)
    rows = density_ratio(result, params)
    growth = growth_rate(result) if result.max_period >= 5 else None

    report = header(config, matrix)
    report.update(
        {
            "params": params.to_dict(),
            "kappa1": str(params.kappa1),
            "census": result.rows(),
            "density": [row.to_dict() for row in rows],
            "final_ratio": rows[-1].to_dict()["ratio_decimal"],
            "decreasing_from": _decreasing_from(rows),
            "note": BOUND_NOTE,
            "growth": None if growth is None else growth.to_dict(),
        }
    )
    return report


def render(report: dict, kind: str, fmt: str) -> str:
    """
    Validate ``report`` against the ``kind`` schema and write it as ``fmt``.

    Args:
        report (dict): A report built by one of the ``cmd_*`` functions.
        kind (str): Its schema name: orbits, reversible, surgery, loops or propb.
        fmt (str): json, tsv or dot; dot exists for surgery and loops only.

    Returns:
        str: The rendered text, ending without a newline for JSON.
    """

    validate_report(report, kind)
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False)
    if fmt == "tsv":
        return jinja.render(f"{kind}.tsv.j2", report=report)
    if fmt == "dot":
        if kind not in DOT_KINDS:
            raise InvalidInputError(f"DOT output is available for {' and '.join(DOT_KINDS)} only")
        return jinja.render(f"{kind}.dot.j2", report=report)
    raise InvalidInputError(f"format must be one of {', '.join(settings.OUTPUT_FORMATS)}")
