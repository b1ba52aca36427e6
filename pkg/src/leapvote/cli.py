"""Command-line interface.

Exit codes: 0 = success / no violations; 1 = violations found or a
checked property failed; 2 = usage or validation error.
"""

import argparse
import sys

from . import fileio, search
from .equilibrium import enumerate_equilibria
from .model import Profile, ValidationError, validate_instance
from .preferences import check_cross_side_agreement

_CONJECTURES = {
    "prop1": search.Conjecture.PROP1,
    "prop2": search.Conjecture.PROP2,
    "thm1": search.Conjecture.THM1,
    "prop4": search.Conjecture.PROP4_IMPLIES_AX2,
    "prop4_implies_ax2": search.Conjecture.PROP4_IMPLIES_AX2,
}


def _range_arg(text: str) -> tuple[int, int]:
    try:
        lo, _, hi = text.partition("..")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 5..9, got {text!r}")


def _profile_arg(text: str) -> Profile:
    try:
        s, _, t = text.partition(",")
        return Profile(int(s), int(t))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a profile like 6,2, got {text!r}")


def _seed_arg(text: str) -> int:
    try:
        seed = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


def _add_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("file", nargs="?", help="instance document path")
    parser.add_argument(
        "--builtin",
        choices=fileio.builtin_names(),
        help="use a built-in instance in place of a file",
    )


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("human", "machine"), default="human", dest="fmt"
    )


def _add_generator_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=_seed_arg, default=0)
    parser.add_argument("--m", type=_range_arg, default=(5, 9), metavar="A..B",
                        help="policy-count range (default 5..9)")
    parser.add_argument("--n", type=_range_arg, default=(2, 6), metavar="A..B",
                        help="voter-count range (default 2..6)")
    parser.add_argument("--party-mode",
                        choices=[mode.value for mode in search.PartyMode])
    parser.add_argument("--attraction-mode",
                        choices=[mode.value for mode in search.AttractionMode])


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leapvote",
        description="Two-party spatial elections with abstention: tables, "
        "equilibria, axiom checks, and falsification campaigns.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate an instance document")
    _add_source(p)
    _add_format(p)

    p = sub.add_parser("table", help="render the unilateral-deviation table")
    _add_source(p)
    _add_format(p)
    p.add_argument("--profile", type=_profile_arg, required=True, metavar="S,T")

    p = sub.add_parser("equilibria", help="enumerate pure-strategy equilibria")
    _add_source(p)
    _add_format(p)

    p = sub.add_parser("classify", help="classify one profile")
    _add_source(p)
    _add_format(p)
    p.add_argument("--profile", type=_profile_arg, required=True, metavar="S,T")

    p = sub.add_parser(
        "axioms",
        help="report single-peakedness, cross-side agreement, and fixed participation",
    )
    _add_source(p)
    _add_format(p)

    p = sub.add_parser("falsify", help="run a seeded falsification campaign")
    p.add_argument("conjecture", choices=sorted(_CONJECTURES))
    _add_generator_flags(p)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument(
        "--no-precondition",
        action="store_true",
        help="check the conclusion on every trial instead of filtering",
    )
    p.add_argument(
        "--builtin",
        choices=fileio.builtin_names(),
        help="inject this built-in instance as trial 0",
    )
    _add_format(p)

    p = sub.add_parser("gen", help="generate one instance document")
    _add_generator_flags(p)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--out", required=True, help="output path")
    _add_format(p)

    return parser


def _load_instance(args):
    if args.builtin and args.file:
        raise ValidationError("malformed", "give a file or --builtin, not both")
    if args.builtin:
        return fileio.builtin_instance(args.builtin)
    if not args.file:
        raise ValidationError("malformed", "an instance file or --builtin is required")
    with open(args.file, "rb") as handle:
        data = handle.read()
    return validate_instance(fileio.parse_instance(data))


def _gen_config(args, conjecture=None) -> search.GenConfig:
    party_mode = args.party_mode
    if party_mode is None:
        if conjecture is search.Conjecture.PROP4_IMPLIES_AX2:
            party_mode = search.PartyMode.SYMMETRIC.value
        else:
            party_mode = search.PartyMode.FREE_SINGLE_PEAKED.value
    attraction_mode = args.attraction_mode
    if attraction_mode is None:
        if conjecture is search.Conjecture.PROP2:
            attraction_mode = search.AttractionMode.FULL.value
        else:
            attraction_mode = search.AttractionMode.RANDOM_INTERVAL.value
    return search.GenConfig(
        m_range=args.m,
        n_range=args.n,
        party_mode=search.PartyMode(party_mode),
        attraction_mode=search.AttractionMode(attraction_mode),
        seed=args.seed,
    )


def _cmd_validate(args) -> int:
    inst = _load_instance(args)
    sys.stdout.write(fileio.render_validation(inst, args.fmt))
    return 0


def _cmd_table(args) -> int:
    inst = _load_instance(args)
    profile = Profile(*args.profile)
    if profile.s not in inst.space or profile.t not in inst.space:
        raise ValidationError(
            "index-out-of-range", f"profile {tuple(profile)} outside 1..{inst.space.size}"
        )
    sys.stdout.write(fileio.render_deviation_table(inst, profile, args.fmt))
    return 0


def _cmd_equilibria(args) -> int:
    inst = _load_instance(args)
    sys.stdout.write(fileio.render_equilibria(inst, enumerate_equilibria(inst), args.fmt))
    return 0


def _cmd_classify(args) -> int:
    inst = _load_instance(args)
    profile = Profile(*args.profile)
    if profile.s not in inst.space or profile.t not in inst.space:
        raise ValidationError(
            "index-out-of-range", f"profile {tuple(profile)} outside 1..{inst.space.size}"
        )
    sys.stdout.write(fileio.render_classification(inst, profile, args.fmt))
    return 0


def _cmd_axioms(args) -> int:
    inst = _load_instance(args)
    sys.stdout.write(fileio.render_axioms(inst, args.fmt))
    agreement, _ = check_cross_side_agreement(inst)
    return 0 if agreement else 1


def _cmd_falsify(args) -> int:
    conjecture = _CONJECTURES[args.conjecture]
    cfg = _gen_config(args, conjecture)
    if args.trials < 0:
        raise ValidationError("malformed", "--trials must be nonnegative")
    inject = fileio.builtin_instance(args.builtin) if args.builtin else None
    report = search.falsify(
        conjecture,
        cfg,
        args.trials,
        apply_precondition=not args.no_precondition,
        inject=inject,
    )
    sys.stdout.write(fileio.render_campaign(report, args.fmt))
    if report.precondition_satisfied == 0:
        sys.stderr.write(
            "warning: no trial satisfied the precondition; "
            "the conclusion was never checked on a qualifying instance\n"
        )
    return 0 if report.ok else 1


def _cmd_gen(args) -> int:
    cfg = _gen_config(args)
    if args.trial < 0:
        raise ValidationError("malformed", "--trial must be nonnegative")
    inst = search.gen_instance(cfg, args.trial)
    text = fileio.serialize_instance(inst)
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(text)
    if args.fmt == "machine":
        sys.stdout.write(
            fileio.render_validation(inst, "machine")
        )
    else:
        sys.stdout.write(
            f"wrote {args.out}: {inst.space.size} policies, {inst.n} voters\n"
        )
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "table": _cmd_table,
    "equilibria": _cmd_equilibria,
    "classify": _cmd_classify,
    "axioms": _cmd_axioms,
    "falsify": _cmd_falsify,
    "gen": _cmd_gen,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (fileio.ParseError, ValidationError, ValueError, OSError) as err:
        sys.stderr.write(f"error: {err}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
