"""Command-line front door for the engine, analytics and simulation harness."""
from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__, analytics, harness
from .cards import DEFAULT_SCALE, Hand, PointScale, parse_card
from .fixtures import SPLIT_HAND_PAIRS
from .policies import parse_play_policy, parse_seat_spec
from .scoring import Scheme

DEFAULT_SEED = 7  # fixed so bare invocations reproduce; --seed random opts out
DEFAULT_PORT = 8360


class CliError(Exception):
    pass


def _parse_seed(text: str) -> int:
    if text.strip().lower() == "random":
        return secrets.randbits(63)
    try:
        return int(text, 0)
    except ValueError:
        raise CliError(f"bad seed {text!r} (integer or 'random')") from None


def _parse_ints(text: str, n: Optional[int] = None) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise CliError(f"expected comma-separated integers, got {text!r}") from None
    if n is not None and len(values) != n:
        raise CliError(f"expected {n} comma-separated integers, got {text!r}")
    return values


def _emit(args, *, table: str, payload: dict, csv_text: Optional[str] = None) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif args.format == "csv":
        if csv_text is None:
            raise CliError("this subcommand has no CSV form")
        text = csv_text
    else:
        text = table if table.endswith("\n") else table + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_line(args, **extra) -> str:
    parts = [f"{k}={v}" for k, v in extra.items()]
    return f"# config: {' '.join(parts)}"


def _ratio_json(value: Fraction) -> dict:
    return {"value": float(value), "numerator": str(value.numerator),
            "denominator": str(value.denominator)}


# --- subcommand handlers -------------------------------------------------------

def _cmd_prob(args) -> int:
    if args.what == "safe-min-bid":
        ratio = analytics.prob_safe_min_bid()
        num = analytics.choose_exact(13, 10) * analytics.choose_exact(39, 3)
        den = analytics.choose_exact(52, 13)
        table = (f"{_config_line(args, what=args.what)}\n"
                 f"P(safe minimum bid) = {float(ratio):.6g} = {num}/{den}")
        payload = {"value": float(ratio), "numerator": str(num), "denominator": str(den)}
        _emit(args, table=table, payload=payload)
        return 0
    # combos
    aliases = {"run7": 7, "run8": 8, "run9": 9}
    spec = args.spec
    if spec in aliases:
        combos = analytics.OPENING_RUN_COMBOS[aliases[spec]]
        reference = analytics.REFERENCE_RUN_PROBS[aliases[spec]]
    else:
        combos = analytics.parse_combo_spec(spec)
        reference = None
    ratio = analytics.honor_combo_prob(combos)
    payload = _ratio_json(ratio)
    payload["combos"] = [dict(c) for c in combos]
    line = (f"{_config_line(args, spec=spec)}\n"
            f"P(combo set) = {float(ratio):.6g} = {ratio.numerator}/{ratio.denominator}")
    if reference is not None:
        payload["reference"] = reference
        line += f"\nreference value (unverified): {reference:g}"
    _emit(args, table=line, payload=payload)
    return 0


def _cmd_dist_points(args) -> int:
    scale = DEFAULT_SCALE
    if args.scale:
        pairs = dict(p.split("=") for p in args.scale.split(","))
        scale = PointScale({k.strip().upper(): int(v) for k, v in pairs.items()})
    dist = analytics.point_distribution(scale)
    payload: dict = {"meta": {"scale": dict(scale.weights)},
                     "probabilities": {str(k): float(v) for k, v in dist.probs.items()}}
    lines = [_config_line(args, scale=dict(scale.weights))]
    csv_lines = ["points,probability"]
    if args.thresholds:
        t = _parse_ints(args.thresholds, 3)
        buckets = analytics.bucket_probs(dist, t)
        payload["thresholds"] = list(t)
        payload["buckets"] = list(buckets)
        for i, b in enumerate(buckets, start=1):
            lines.append(f"P(level {i} bucket) = {b:.6g}")
            csv_lines.append(f"bucket{i},{b!r}")
    else:
        for points, p in dist.probs.items():
            lines.append(f"{points:3d}  {float(p):.10g}")
            csv_lines.append(f"{points},{float(p)!r}")
    _emit(args, table="\n".join(lines), payload=payload,
          csv_text="\n".join(csv_lines) + "\n")
    return 0


def _cmd_simulate_nt(args) -> int:
    thresholds = _parse_ints(args.thresholds, 3)
    seed = _parse_seed(args.seed)
    report = harness.simulate_nt_bidding(thresholds, args.n, seed,
                                         play_policy=args.policy)
    lines = [_config_line(args, thresholds=report.ruleset, n=args.n, seed=seed,
                          policy=args.policy)]
    for level, c in sorted(report.levels.items()):
        lines.append(f"{level}NT  calls {c.calls:>8}  made {c.made:>8}  failed {c.failed:>8}")
    _emit(args, table="\n".join(lines), payload=report.to_json(),
          csv_text=report.to_csv())
    return 0


def _cmd_tournament(args) -> int:
    seat_specs = args.seats.split(",")
    if len(seat_specs) != 3:
        raise CliError("--seats needs exactly three comma-separated specs")
    seats = [parse_seat_spec(s) for s in seat_specs]
    schemes = tuple(Scheme.parse(s) for s in args.schemes.split(","))
    seed = _parse_seed(args.seed)
    report = harness.run_tournament(seats, args.n, schemes, seed)
    lines = [_config_line(args, seats=args.seats, n=args.n, schemes=args.schemes,
                          seed=seed)]
    for row in report.rows:
        pts = "  ".join(
            f"{s.value}:{'/'.join(f'{v:g}' for v in row.points[s])}" for s in schemes)
        lines.append(f"game {row.index:>3}  bidder {row.declarer}  {row.contract:<3} "
                     f"{row.doubling:<9} tricks {row.declarer_tricks:>2} "
                     f"{'Win ' if row.made else 'Loss'}  {pts}")
    for s in schemes:
        totals = report.totals(s)
        lines.append(f"{s.value}: totals {'/'.join(f'{v:g}' for v in totals)} "
                     f"SD {report.sd(s):.1f}")
    _emit(args, table="\n".join(lines), payload=report.to_json(),
          csv_text=report.to_csv())
    return 0


def _parse_hand_pair(text: str) -> tuple[Hand, Hand]:
    if text.startswith("pair:"):
        row = int(text.split(":", 1)[1])
        if not 1 <= row <= len(SPLIT_HAND_PAIRS):
            raise CliError(f"built-in pair index {row} outside 1..{len(SPLIT_HAND_PAIRS)}")
        return SPLIT_HAND_PAIRS[row - 1]
    if not os.path.exists(text):
        raise CliError(f"--hands expects 'pair:<1-10>' or a JSON file; {text!r} not found")
    with open(text, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return (Hand(parse_card(t) for t in obj["declarer"]),
            Hand(parse_card(t) for t in obj["partner"]))


def _cmd_enumerate(args) -> int:
    hand_decl, hand_dummy = _parse_hand_pair(args.hands)
    seed = _parse_seed(args.seed)
    policies = None
    if args.policy != "general":
        p = parse_play_policy(args.policy)
        policies = {s: p for s in range(4)}
    if args.exact:
        def progress(done: int, total: int) -> None:
            sys.stderr.write(f"\r{done}/{total} splits played")
            sys.stderr.flush()
            if done == total:
                sys.stderr.write("\n")
        dist = harness.enumerate_splits(hand_decl, hand_dummy, policies,
                                        mode="exact", progress=progress)
    else:
        dist = harness.enumerate_splits(hand_decl, hand_dummy, policies,
                                        mode="sampled", n_samples=args.sample,
                                        seed=seed)
    lines = [_config_line(args, hands=args.hands, mode=dist.mode, total=dist.total,
                          seed=seed)]
    for tricks, freq in enumerate(dist.frequencies):
        if freq:
            lines.append(f"declarer-side tricks {tricks:>2}: {freq}")
    _emit(args, table="\n".join(lines), payload=dist.to_json(), csv_text=dist.to_csv())
    return 0


def _cmd_fixtures(args) -> int:
    if args.name != "example1":
        raise CliError(f"unknown fixture {args.name!r} (try 'example1')")
    report = harness.reproduce_fixtures()
    lines = [_config_line(args, fixture=args.name)]
    for row in report.rows:
        lines.append(
            f"{row.strategy:<8} per-seat {row.per_seat} (ref {row.expected_per_seat}, "
            f"{'match' if row.per_seat_match else 'MISMATCH'})  "
            f"teams {row.team_split} (ref {row.expected_team_split}, "
            f"{'match' if row.team_match else 'MISMATCH'})")
    _emit(args, table="\n".join(lines), payload=report.to_json())
    return 0


def _cmd_stats(args) -> int:
    try:
        values = [float(x) for x in args.values.split(",")]
    except ValueError:
        raise CliError(f"--values expects comma-separated numbers, got {args.values!r}")
    m = analytics.moments(values)
    lines = [_config_line(args, n=m.n),
             f"mean {m.mean:.6g}",
             f"population SD {m.population_sd:.6g}"]
    if m.skewness is not None:
        lines.append(f"skewness {m.skewness:.6g}")
        lines.append(f"excess kurtosis {m.excess_kurtosis:.6g}")
    else:
        lines.append("skewness/kurtosis undefined for this sample")
    payload = {"n": m.n, "mean": m.mean, "populationSD": m.population_sd,
               "skewness": m.skewness, "excessKurtosis": m.excess_kurtosis}
    _emit(args, table="\n".join(lines), payload=payload)
    return 0


def _resolve_port(args) -> int:
    if args.port is not None:
        return args.port
    env = os.environ.get("TRIBRIDGE_PORT")
    return int(env) if env else DEFAULT_PORT


def _find_static_dir(explicit: Optional[str]) -> Optional[str]:
    if explicit:
        return explicit
    candidate = os.environ.get("TRIBRIDGE_STATIC", "frontend")
    return candidate if os.path.isfile(os.path.join(candidate, "index.html")) else None


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import SessionManager, create_app
    static = _find_static_dir(args.static)
    app = create_app(SessionManager(), static_dir=static)
    port = _resolve_port(args)
    print(f"# serving on {args.host}:{port}"
          + (" (web client at /app/)" if static else ""), flush=True)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def _cmd_play(args) -> int:
    import uvicorn

    from .service import SessionManager, create_app
    if not args.interactive:
        raise CliError("play requires --interactive (the session is browser-driven)")
    manager = SessionManager()
    seed = _parse_seed(args.seed)
    session = manager.create({
        "seats": ["human", args.bots, args.bots],
        "seed": seed,
    })
    static = _find_static_dir(args.static)
    app = create_app(manager, static_dir=static)
    port = _resolve_port(args)
    print(f"# session {session.id} created: you are seat 0 against '{args.bots}' bots",
          flush=True)
    if static:
        print(f"# open http://{args.host}:{port}/app/?session={session.id}&seat=0",
              flush=True)
    else:
        print(f"# point a client at http://{args.host}:{port} "
              f"(session={session.id}, seat=0)", flush=True)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tribridge",
        description="Three-player auction-bridge engine, analytics and simulations")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default="table")
    common.add_argument("--output", help="write output to this path instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    prob = sub.add_parser("prob", parents=[common], help="exact probabilities")
    prob_sub = prob.add_subparsers(dest="what", required=True)
    prob_sub.add_parser("safe-min-bid", parents=[common])
    combos = prob_sub.add_parser("combos", parents=[common])
    combos.add_argument("spec", help="combo rows like '4A+3K,4A+2K+1Q' or run7/run8/run9")

    dist = sub.add_parser("dist", parents=[common], help="hand point-count law")
    dist_sub = dist.add_subparsers(dest="what", required=True)
    points = dist_sub.add_parser("points", parents=[common])
    points.add_argument("--scale", help="rank weights like 'A=5,K=4,Q=3,J=2,T=1'")
    points.add_argument("--thresholds", help="three increasing ints a,b,c")

    sim = sub.add_parser("simulate", parents=[common], help="Monte Carlo experiments")
    sim_sub = sim.add_subparsers(dest="what", required=True)
    nt = sim_sub.add_parser("nt", parents=[common])
    nt.add_argument("--thresholds", required=True, help="three increasing ints a,b,c")
    nt.add_argument("-n", type=int, default=1_000_000)
    nt.add_argument("--seed", default=str(DEFAULT_SEED))
    nt.add_argument("--policy", default="general", help="playout policy for all seats")

    tour = sub.add_parser("tournament", parents=[common], help="multi-deal match")
    tour.add_argument("--seats", required=True,
                      help="three seat specs 'bid+play', e.g. general,defensive+hcf,bluff")
    tour.add_argument("-n", type=int, default=12)
    tour.add_argument("--schemes", default="previous,new")
    tour.add_argument("--seed", default=str(DEFAULT_SEED))

    enum = sub.add_parser("enumerate", parents=[common],
                          help="partner-split trick distribution")
    enum.add_argument("--hands", required=True,
                      help="'pair:<1-10>' (built-in) or a JSON file "
                           "{\"declarer\": [...], \"partner\": [...]}")
    group = enum.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true",
                       help="walk all 10,400,600 splits (long-running)")
    group.add_argument("--sample", type=int, default=10_000)
    enum.add_argument("--seed", default=str(DEFAULT_SEED))
    enum.add_argument("--policy", default="general")

    fix = sub.add_parser("fixtures", parents=[common], help="reproduce reference deals")
    fix.add_argument("name", nargs="?", default="example1")

    stats = sub.add_parser("stats", parents=[common], help="descriptive statistics")
    stats.add_argument("--values", required=True, help="comma-separated numbers")

    serve = sub.add_parser("serve", help="run the live-play HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=None,
                       help=f"default {DEFAULT_PORT}, or env TRIBRIDGE_PORT")
    serve.add_argument("--static", default=None,
                       help="directory with the built web client (default: "
                            "./frontend when present, or env TRIBRIDGE_STATIC)")

    play = sub.add_parser("play", help="create a live session and serve it")
    play.add_argument("--interactive", action="store_true")
    play.add_argument("--bots", default="general", help="seat spec for the two bots")
    play.add_argument("--seed", default=str(DEFAULT_SEED))
    play.add_argument("--host", default="127.0.0.1")
    play.add_argument("--port", type=int, default=None)
    play.add_argument("--static", default=None)

    parser.set_defaults(func=None)
    prob.set_defaults(func=_cmd_prob)
    points.set_defaults(func=_cmd_dist_points)
    nt.set_defaults(func=_cmd_simulate_nt)
    tour.set_defaults(func=_cmd_tournament)
    enum.set_defaults(func=_cmd_enumerate)
    fix.set_defaults(func=_cmd_fixtures)
    stats.set_defaults(func=_cmd_stats)
    serve.set_defaults(func=_cmd_serve)
    play.set_defaults(func=_cmd_play)
    return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    if args.func is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyboardInterrupt, BrokenPipeError):
        return 1
    except Exception as exc:  # runtime failures map to exit 1
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
