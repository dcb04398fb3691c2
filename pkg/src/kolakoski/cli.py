"""Command-line front end: ``kolakoski <command> [flags]``.

Every JSON document starts with a ``config`` object holding the resolved
options (output paths excluded), so rerunning with ``--config`` on that
object reproduces the file byte for byte.
"""

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .constant_length import (
    KINDS,
    coincidence_matrix,
    constant_length_substitution,
    derive,
    full_coincidence,
    height,
    minimal_coincidence,
    numbered_substitution,
    position_gcd,
    spectral_verdict,
    spectrum_report,
)
from .diffraction import bragg_support, diffraction_spectrum
from .errors import InternalConsistencyError, KolakoskiError
from .exact import format_poly
from .ladic import ColorMap, EmbeddingSpec, default_colors, render
from .model_set import (
    coset_decomposition,
    cut_project_descriptor,
    ifs_system,
    letter_frequencies,
    verify_cosets_against_prefix,
)
from .substitution import (
    KolParams,
    Substitution,
    format_bi_prefix,
    format_values,
    is_constant_length,
    kolakoski_bi_prefix,
    kolakoski_prefix,
)

DEFAULTS = {
    "generate": {"p": 2, "q": 1, "n": 20, "method": "self", "two_sided": False},
    "derive": {"m": 2, "n": 1, "kind": "theta"},
    "analyze": {"m": 2, "n": 1},
    "cosets": {"m": 2, "n": 1, "substitution": None, "letter": None, "depth": 4, "verify": None},
    "diffract": {
        "m": 2,
        "n": 1,
        "c_p": "1,0",
        "c_q": "0,0",
        "depth": 8,
        "max_denom": 2,
        "oracle_n": None,
        "all": False,
    },
    "visualize": {
        "m": 2,
        "n": 1,
        "substitution": None,
        "depth": 4,
        "dimension": 2,
        "contraction": "3/10",
        "colors": None,
        "size": 800,
    },
    "report": {"m": 2, "n": 1, "depth": 4},
}


class UsageError(Exception):
    pass


def _json_default(obj):
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj):
    return json.dumps(obj, default=_json_default, indent=2, ensure_ascii=False) + "\n"


def parse_complex(text):
    """``"re,im"`` or a plain real number."""
    parts = str(text).split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot read complex weight {text!r}; expected 're,im'")


def _params_pq(cfg):
    return KolParams(int(cfg["p"]), int(cfg["q"]))


def _params_mn(cfg):
    return KolParams.from_mn(int(cfg["m"]), int(cfg["n"]))


def _load_substitution(path):
    text = Path(path).read_text()
    if str(path).endswith(".json"):
        return Substitution.from_json(json.loads(text))
    return Substitution.from_text(text, name=Path(path).stem)


def _substitution_from(cfg):
    if cfg.get("substitution"):
        return _load_substitution(cfg["substitution"])
    return constant_length_substitution(_params_mn(cfg)).sub


def certificate_json(sub, cert):
    if cert is None:
        return None
    return {"k": cert.k, "digits": list(cert.digits), "letter": sub.labels[cert.letter]}


def spectrum_json(report):
    return {
        "level": report.level,
        "primes": list(report.ladic_primes),
        "cyclic": report.cyclic_order,
        "group": report.describe(),
    }


def analysis_record(derived):
    """Height, gcd, coincidence and verdict for a derived substitution (None where not applicable)."""
    sub = derived.sub
    ell = is_constant_length(sub)
    record = {"length": ell, "height": None, "gcd": None, "coincidence": None, "pure_point": None}
    if ell is not None:
        hr = height(sub)
        record["height"] = hr.h
        record["gcd"] = hr.g
        if hr.stable and hr.h == 1:
            record["coincidence"] = certificate_json(sub, full_coincidence(sub, check_height=False))
            record["pure_point"] = spectral_verdict(sub).pure_point
    record["spectrum"] = spectrum_json(spectrum_report(derived.params, "kolakoski", check=False))
    return record


def cmd_generate(cfg):
    params = _params_pq(cfg)
    n = int(cfg["n"])
    if n < 0:
        raise UsageError("--n must be >= 0")
    if cfg["two_sided"]:
        left, right = kolakoski_bi_prefix(params, n)
        return format_bi_prefix(left, right) + "\n"
    return format_values(kolakoski_prefix(params, n, method=cfg["method"])) + "\n"


def cmd_derive(cfg):
    params = _params_mn(cfg)
    derived = derive(params, cfg["kind"])
    return dumps(
        {
            "config": cfg,
            "kind": derived.kind,
            "substitution": derived.sub.to_text(),
            "alphabet": list(derived.sub.labels),
            "expansion": {lab: list(e) for lab, e in zip(derived.sub.labels, derived.expansion)},
            "analysis": analysis_record(derived),
        }
    )


def analyze_record(params):
    derived = constant_length_substitution(params)
    sub = derived.sub
    hr = height(sub)
    verdict = spectral_verdict(sub)
    numbered = numbered_substitution(params)
    nh = height(numbered)
    cert = full_coincidence(sub)
    cm = coincidence_matrix(sub)
    return {
        "params": {"p": params.p, "q": params.q, "m": params.m, "n": params.n},
        "substitution": derived.kind,
        "length": derived.ell,
        "alphabet": list(sub.labels),
        "height": hr.h,
        "gcd": position_gcd(sub, sub.labels[0], hr.depth_used),
        "numbered": {"height": nh.h, "gcd": nh.g},
        "coincidence": certificate_json(sub, cert),
        "minimal_coincidence": certificate_json(sub, minimal_coincidence(sub)),
        "coincidence_charpoly": format_poly(list(verdict.charpoly)),
        "positive_column": None
        if verdict.positive_column is None
        else {"power": verdict.positive_column[0], "pair": [sub.labels[i] for i in verdict.positive_column[1]]},
        "pure_point": verdict.pure_point,
        "coincidence_matrix_dim": cm.dim,
        "spectrum": spectrum_json(spectrum_report(params, "kolakoski", check=False)),
        "sigma_spectrum": spectrum_json(spectrum_report(params, "sigma", check=False)),
    }


def cmd_analyze(cfg):
    return dumps({"config": cfg, **analyze_record(_params_mn(cfg))})


def _coset_doc(sub, cfg):
    letter = cfg["letter"] if cfg["letter"] is not None else sub.labels[-1]
    dec = coset_decomposition(sub, letter, int(cfg["depth"]))
    doc = {"config": cfg, **dec.to_json()}
    doc["frequency"] = dec.frequency
    if cfg.get("verify"):
        report = verify_cosets_against_prefix(sub, dec, int(cfg["verify"]))
        doc["verification"] = {
            "n": int(cfg["verify"]),
            "checked": report.checked,
            "violations": [list(v) for v in report.violations],
            "empirical_frequency": report.empirical_frequency,
        }
    return dec, doc


def cmd_cosets(cfg, csv_path=None):
    sub = _substitution_from(cfg)
    dec, doc = _coset_doc(sub, cfg)
    if csv_path:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["modulus", "residue"])
        for c in dec.cosets:
            writer.writerow([c.modulus, c.residue])
        Path(csv_path).write_text(buf.getvalue())
    return dumps(doc)


def cmd_diffract(cfg, csv_path=None):
    params = _params_mn(cfg)
    c_p, c_q = parse_complex(cfg["c_p"]), parse_complex(cfg["c_q"])
    peaks = diffraction_spectrum(
        params,
        c_p,
        c_q,
        max_depth=int(cfg["depth"]),
        max_denom=int(cfg["max_denom"]),
        oracle_n=int(cfg["oracle_n"]) if cfg["oracle_n"] else None,
        include_all=bool(cfg["all"]),
    )
    rows = []
    for pk in peaks:
        row = {
            "frequency": pk.atomic_frequency,
            "block_frequency": pk.frequency,
            "amplitude": pk.amplitude,
            "intensity": pk.intensity,
            "error_bound": pk.truncation_error,
        }
        if pk.oracle is not None:
            row["oracle"] = {"estimate": pk.oracle, "delta": pk.oracle_delta}
        rows.append(row)
    if csv_path:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["num", "den", "re", "im", "intensity", "error_bound"])
        for pk in peaks:
            f = pk.atomic_frequency
            writer.writerow(
                [f.numerator, f.denominator, f"{pk.amplitude.real:.12g}", f"{pk.amplitude.imag:.12g}",
                 f"{pk.intensity:.12g}", f"{pk.truncation_error:.12g}"]
            )
        Path(csv_path).write_text(buf.getvalue())
    support = bragg_support(params)
    return dumps({"config": cfg, "support": {**support.to_json(), "set": support.describe()}, "peaks": rows})


def _parse_colors(text, labels):
    if not text:
        return default_colors(labels)
    mapping = {}
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"colour spec {item!r} must look like letter=#rrggbb")
        key, value = item.split("=", 1)
        mapping[key.strip()] = value.strip()
    mixed = mapping.pop("mixed", "#f5f0e1")
    base = default_colors(labels).colors
    base.update(mapping)
    return ColorMap(base, mixed)


def cmd_visualize(cfg):
    sub = _substitution_from(cfg)
    ell = is_constant_length(sub)
    try:
        contraction = Fraction(cfg["contraction"])
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad contraction {cfg['contraction']!r}") from None
    spec = EmbeddingSpec(ell, int(cfg["dimension"]), contraction, int(cfg["size"]))
    svg = render(sub, int(cfg["depth"]), spec, _parse_colors(cfg["colors"], sub.labels))
    header, rest = svg.split("\n", 1)
    echo = json.dumps(cfg, sort_keys=True).replace("--", "- -")
    return f"{header}\n<!-- config: {echo} -->\n{rest}"


def report_record(params, depth):
    derived = constant_length_substitution(params)
    sub = derived.sub
    cm = coincidence_matrix(sub)
    freqs = letter_frequencies(sub)
    decs = [coset_decomposition(sub, i, depth) for i in range(sub.size)]
    return {
        "analysis": analyze_record(params),
        "substitutions": {
            "numbered": numbered_substitution(params).sub.to_text(),
            derived.kind: sub.to_text(),
            "expansion": {lab: list(e) for lab, e in zip(sub.labels, derived.expansion)},
        },
        "coincidence_matrix": {
            "pairs": cm.pair_labels(),
            "C": cm.as_lists(),
            "C2": cm.power(2),
            "charpoly": list(cm.charpoly()),
        },
        "frequencies": dict(zip(sub.labels, freqs)),
        "ifs": ifs_system(sub).describe().split("\n"),
        "cosets": {dec.label: dec.to_json() for dec in decs},
        "cut_and_project": cut_project_descriptor(params).to_json(),
        "bragg_support": {**bragg_support(params).to_json(), "set": bragg_support(params).describe()},
    }


def cmd_report(cfg):
    return dumps({"config": cfg, **report_record(_params_mn(cfg), int(cfg["depth"]))})


COMMANDS = {
    "generate": cmd_generate,
    "derive": cmd_derive,
    "analyze": cmd_analyze,
    "cosets": cmd_cosets,
    "diffract": cmd_diffract,
    "visualize": cmd_visualize,
    "report": cmd_report,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(prog="kolakoski", description="Kolakoski-(2m,2n) substitutions, model sets and diffraction.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, mn=True, output=True):
        p.add_argument("--config", help="JSON file with default option values")
        if mn:
            p.add_argument("--m", type=int)
            p.add_argument("--n", type=int)
        if output:
            p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("generate", help="print a prefix of Kol(p,q)")
    common(p, mn=False)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--n", type=int, help="number of letters")
    p.add_argument("--method", choices=["self", "alternating"])
    p.add_argument("--two-sided", dest="two_sided", action="store_true", default=None)

    p = sub.add_parser("derive", help="derived substitution and its analysis record")
    common(p)
    p.add_argument("--kind", choices=list(KINDS))

    p = sub.add_parser("analyze", help="height, coincidence and spectrum of Kol(2m,2n)")
    common(p)

    p = sub.add_parser("cosets", help="coset decomposition of one letter-position set")
    common(p)
    p.add_argument("--substitution", help="substitution file (text or .json) instead of --m/--n")
    p.add_argument("--letter")
    p.add_argument("--depth", type=int)
    p.add_argument("--verify", type=int, metavar="N", help="check the cosets on a prefix of length N")
    p.add_argument("--csv", help="also write (modulus, residue) rows here")

    p = sub.add_parser("diffract", help="Bragg peaks of Kol(2m,2n)")
    common(p)
    p.add_argument("--c-p", dest="c_p", help="weight of letter 2m as 're,im'")
    p.add_argument("--c-q", dest="c_q", help="weight of letter 2n as 're,im'")
    p.add_argument("--depth", type=int)
    p.add_argument("--max-denom", dest="max_denom", type=int, help="largest s in k/(4 ell^s)")
    p.add_argument("--oracle-n", dest="oracle_n", type=int, help="cross-check against an exponential sum of this length")
    p.add_argument("--all", action="store_true", default=None, help="keep peaks below the error bound")
    p.add_argument("--csv", help="also write the peaks as CSV here")

    p = sub.add_parser("visualize", help="SVG picture of the internal space")
    common(p)
    p.add_argument("--substitution")
    p.add_argument("--depth", type=int)
    p.add_argument("--dimension", type=int, choices=[1, 2])
    p.add_argument("--contraction")
    p.add_argument("--colors", help="e.g. 'a1=#000000,a2=#555555,b1=#bbbbbb,mixed=#f5f0e1'")
    p.add_argument("--size", type=int)

    p = sub.add_parser("report", help="everything for one (m,n) as a single JSON document")
    common(p)
    p.add_argument("--depth", type=int)
    return parser


def resolve_config(args):
    """Built-in defaults, then the --config file, then explicit flags."""
    cfg = dict(DEFAULTS[args.command])
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        loaded = loaded.get("config", loaded)
        unknown = set(loaded) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return {"command": args.command, **cfg}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve_config(args)
        command = cfg.pop("command")
        handler = COMMANDS[command]
        extra = {"csv_path": getattr(args, "csv", None)} if command in ("cosets", "diffract") else {}
        text = handler(cfg, **extra)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    except (KolakoskiError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001 - report, do not dump a traceback
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
