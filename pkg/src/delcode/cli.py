"""Command-line front end. Exit codes: 0 ok, 1 decode failure, 2 bad input.

All payload files hold one line of ASCII '0'/'1' (empty line = empty string).
Reports are deterministic key=value lines with sorted keys.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path
from random import Random

from . import bits as bitlib
from . import codec, coloring, mixer, vt
from .blockhash import digest_length_bits
from .errors import DelcodeError
from .mixer import ParameterSet, derive_params, params_from_text, params_to_text

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _read_bits(path: str) -> str:
    text = Path(path).read_text()
    line = text.splitlines()[0] if text.splitlines() else ""
    if line.strip("01"):
        raise DelcodeError(f"{path}: payload must be '0'/'1' characters")
    return line


def _write_bits(path: str, s: str) -> None:
    Path(path).write_text(s + "\n")


def _report(pairs: dict) -> None:
    for key in sorted(pairs):
        print(f"{key}={pairs[key]}")


def _load_params(path: str) -> ParameterSet:
    return params_from_text(Path(path).read_text())


# subcommands -----------------------------------------------------------------

def _cmd_params(args) -> int:
    p = derive_params(args.n, args.k, profile=args.profile, variant=args.variant)
    Path(args.out).write_text(params_to_text(p))
    _report({"n": p.n, "k": p.k, "m": p.m, "d": p.d, "L": p.L, "B": p.B,
             "w": p.w, "c": p.c, "profile": p.profile, "variant": p.variant,
             "out": args.out})
    return EXIT_OK


def _cmd_encode(args) -> int:
    p = _load_params(args.params)
    msg = _read_bits(args.infile)
    cw = codec.encode(msg, p) if p.variant == "deletion" else codec.encode_indel(msg, p)
    _write_bits(args.out, cw)
    geom = codec.geometry(p)
    _report({"n": p.n, "N": geom.N, "redundancy": geom.N - p.n, "out": args.out})
    return EXIT_OK


def _cmd_decode(args) -> int:
    p = _load_params(args.params)
    rec = _read_bits(args.infile)
    msg = codec.decode(rec, p) if p.variant == "deletion" else codec.decode_indel(rec, p)
    if msg is None:
        _report({"result": "fail"})
        return EXIT_FAIL
    _write_bits(args.out, msg)
    _report({"result": "ok", "out": args.out})
    return EXIT_OK


def _cmd_corrupt(args) -> int:
    p = _load_params(args.params)
    src = _read_bits(args.infile)
    channel = bitlib.channel_indel if p.variant == "indel" else bitlib.channel_delete
    if args.mode == "random":
        out = channel(src, args.k, "seeded-random", args.seed)
        _write_bits(args.out, out)
        _report({"mode": "random", "k": args.k, "seed": args.seed, "out": args.out})
        return EXIT_OK
    stream = channel(src, args.k, "adversarial-enumerate")
    with open(args.out, "w") as fh:
        count = 0
        for y in stream:
            fh.write(y + "\n")
            count += 1
            if args.limit and count >= args.limit:
                break
    _report({"mode": "adversarial", "k": args.k, "outputs": count, "out": args.out})
    return EXIT_OK


def _cmd_stress(args) -> int:
    p = _load_params(args.params)
    rng = Random(args.seed)
    n_msgs = max(1, min(args.messages, args.trials))
    per = -(-args.trials // n_msgs)
    failures = 0
    ran = 0
    start = time.monotonic()
    for _ in range(n_msgs):
        msg = bitlib.random_bitstring(p.n, rng)
        if p.variant == "deletion":
            cw = codec.encode(msg, p)
        else:
            cw = codec.encode_indel(msg, p)
        for _ in range(per):
            if ran >= args.trials:
                break
            delta = rng.randint(0, p.k)
            if p.variant == "deletion":
                rec = bitlib.channel_delete(cw, delta, "seeded-random",
                                            rng.getrandbits(32))
                got = codec.decode(rec, p)
            else:
                rec = bitlib.channel_indel(cw, delta, "seeded-random",
                                           rng.getrandbits(32))
                got = codec.decode_indel(rec, p)
            failures += got != msg
            ran += 1
    geom = codec.geometry(p)
    _report({"trials": ran, "failures": failures, "messages": n_msgs,
             "n": p.n, "N": geom.N, "redundancy": geom.N - p.n,
             "elapsed_s": round(time.monotonic() - start, 3)})
    return EXIT_OK if failures == 0 else EXIT_FAIL


def _cmd_oracle_build(args) -> int:
    path = Path(args.out)
    if args.check:
        disk = coloring.load_table(path)
        fresh = coloring.build_color_table(args.length, args.k, args.variant,
                                           args.threshold)
        same = (disk.length, disk.k, disk.variant, disk.threshold,
                disk.color_count) == (fresh.length, fresh.k, fresh.variant,
                                      fresh.threshold, fresh.color_count) \
            and (disk.colors == fresh.colors).all()
        _report({"check": "ok" if same else "mismatch", "path": str(path)})
        return EXIT_OK if same else EXIT_FAIL
    table = coloring.build_color_table(args.length, args.k, args.variant,
                                       args.threshold)
    coloring.save_table(table, path)
    _report({"length": table.length, "k": table.k, "variant": table.variant,
             "threshold": table.threshold, "color_count": table.color_count,
             "width": table.width, "out": str(path)})
    return EXIT_OK


def _cmd_vt(args) -> int:
    if args.vt_cmd == "syndrome":
        x = _read_bits(args.infile)
        syn = vt.vt_syndrome(x)
        _report({"n": syn.n, "residue": syn.residue})
        return EXIT_OK
    if args.vt_cmd == "decode":
        y = _read_bits(args.infile)
        out = vt.vt_decode(y, args.n)
        if out is None:
            _report({"result": "fail"})
            return EXIT_FAIL
        if args.out:
            _write_bits(args.out, out)
        _report({"result": "ok", "decoded": out})
        return EXIT_OK
    members = vt.vt_members(args.n)
    _report({"n": args.n, "members": len(members),
             "lower_bound": math.ceil((1 << args.n) / (args.n + 1))})
    return EXIT_OK


def _cmd_census(args) -> int:
    size = coloring.greedy_code_census(args.n, args.k)
    bound = (1 << args.n) / (2 * args.n ** (2 * args.k) + 1)
    _report({"n": args.n, "k": args.k, "census": size,
             "coloring_lower_bound": math.ceil(bound)})
    return EXIT_OK


def _cmd_linear(args) -> int:
    n, k = args.n, args.k
    dim = coloring.max_linear_dimension(n, k)
    report = {"n": n, "k": k, "max_dimension": dim,
              "upper_bound": n // (k + 1) + (k + 1) ** 2,
              "repetition_dimension": n // (k + 1)}
    violations = 0
    checked = 0
    for rows in coloring.linear_deletion_codes(n, k, dim, limit=args.limit):
        for i in range(0, k + 1):
            for j in range(i + 1, k + 1):
                d = coloring.shift_intersection_dim(rows, n, i, j)
                checked += 1
                if d > math.gcd(j - i, n):
                    violations += 1
    report["shift_pairs_checked"] = checked
    report["shift_bound_violations"] = violations
    _report(report)
    return EXIT_OK if violations == 0 else EXIT_FAIL


def _paper_lengths(n: int, k: int) -> dict:
    """Closed-form paper-profile segment lengths; pure arithmetic, no tables."""
    m = mixer.paper_m(k)
    d = math.floor(20000 * k * (math.log2(k) ** 2) * math.log2(n))
    L = math.ceil(m * (1 << m) * (math.log2(n * (1 << m)) + 1))
    w = max(8, (n - m + 2 + 2 * k).bit_length())
    B_seg = max(k + 1, (d - 1).bit_length())
    seg = digest_length_bits(d, B_seg, k, "deletion", bound=True) + d.bit_length()
    c = -(-seg // w)
    hm = (1 << m) * 2 * k * c * w
    B_t = max(k + 1, (L - 1).bit_length())
    t_dig = digest_length_bits(L, B_t, k, "deletion", bound=True)
    B_hm = max(k + 1, (hm - 1).bit_length())
    hm_dig = digest_length_bits(hm, B_hm, k, "deletion", bound=True)
    N = n + L + (k + 1) * t_dig + hm + (k + 1) * hm_dig
    return {"m": m, "d": d, "L": L, "w": w, "c": c, "hm": hm, "N": N,
            "redundancy": N - n}


def _cmd_redundancy(args) -> int:
    rows = []
    for k in range(args.k_min, args.k_max + 1):
        for exp in range(args.n_exp_min, args.n_exp_max + 1, args.n_exp_step):
            n = 1 << exp
            if args.profile == "paper":
                row = _paper_lengths(n, k)
                red = row["redundancy"]
                flag = "paper"
            else:
                p = derive_params(n, k, profile="desk")
                red = codec.geometry(p).N - n
                flag = "desk"
            ratio = red / (k * k * math.log2(k) * exp) if k > 1 else float("nan")
            rows.append((k, exp, red, ratio, flag))
    for k, exp, red, ratio, flag in rows:
        print(f"k={k} n=2^{exp} redundancy={red} ratio={ratio:.6g} profile={flag}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="delcode",
                                 description="k-deletion / k-indel codec toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("params", help="derive and write a parameter file")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--profile", default="desk", choices=["desk", "paper"])
    sp.add_argument("--variant", default="deletion", choices=["deletion", "indel"])
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=_cmd_params)

    sp = sub.add_parser("encode", help="encode a message file")
    sp.add_argument("--params", required=True)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=_cmd_encode)

    sp = sub.add_parser("decode", help="decode a received file")
    sp.add_argument("--params", required=True)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=_cmd_decode)

    sp = sub.add_parser("corrupt", help="simulate the channel on a codeword file")
    sp.add_argument("--params", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--mode", choices=["random", "adversarial"], required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--limit", type=int, default=0,
                    help="cap the adversarial stream (0 = no cap)")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=_cmd_corrupt)

    sp = sub.add_parser("stress", help="roundtrip stress run; failures must be 0")
    sp.add_argument("--params", required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--messages", type=int, default=8)
    sp.set_defaults(fn=_cmd_stress)

    sp = sub.add_parser("oracle", help="color-table management")
    osub = sp.add_subparsers(dest="oracle_cmd", required=True)
    ob = osub.add_parser("build-table")
    ob.add_argument("--len", dest="length", type=int, required=True)
    ob.add_argument("--k", type=int, required=True)
    ob.add_argument("--variant", default="deletion", choices=["deletion", "indel"])
    ob.add_argument("--threshold", type=int, default=None)
    ob.add_argument("--out", required=True)
    ob.add_argument("--check", action="store_true",
                    help="verify an existing file against a fresh build")
    ob.set_defaults(fn=_cmd_oracle_build)

    sp = sub.add_parser("vt", help="Varshamov-Tenengolts baseline")
    vsub = sp.add_subparsers(dest="vt_cmd", required=True)
    vs = vsub.add_parser("syndrome")
    vs.add_argument("--in", dest="infile", required=True)
    vs.set_defaults(fn=_cmd_vt)
    vd = vsub.add_parser("decode")
    vd.add_argument("--in", dest="infile", required=True)
    vd.add_argument("--n", type=int, required=True)
    vd.add_argument("--out", default=None)
    vd.set_defaults(fn=_cmd_vt)
    vc = vsub.add_parser("census")
    vc.add_argument("--n", type=int, required=True)
    vc.set_defaults(fn=_cmd_vt)

    sp = sub.add_parser("census", help="greedy deletion-code census at small n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(fn=_cmd_census)

    sp = sub.add_parser("linear", help="max linear-code dimension experiment")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--limit", type=int, default=25,
                    help="codes to check for the shift-intersection bound")
    sp.set_defaults(fn=_cmd_linear)

    sp = sub.add_parser("redundancy", help="redundancy table over k and n ranges")
    sp.add_argument("--k-min", type=int, default=2)
    sp.add_argument("--k-max", type=int, default=8)
    sp.add_argument("--n-exp-min", type=int, default=20)
    sp.add_argument("--n-exp-max", type=int, default=60)
    sp.add_argument("--n-exp-step", type=int, default=10)
    sp.add_argument("--profile", default="paper", choices=["paper", "desk"])
    sp.set_defaults(fn=_cmd_redundancy)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (DelcodeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
