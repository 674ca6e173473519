"""Command-line entry point: ``wavecluster {synth,ingest,decompose,cluster,pipeline}``.

Exit status is 0 on success, 1 for data or I/O errors and 2 for usage errors.
Set ``WAVECLUSTER_LOG`` (e.g. ``INFO``) to change the log level.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import io as wio
from .cluster import cluster_run, default_variants, parse_variant
from .prep import (DataError, group_keys, impute, prepare_for_clustering, read_samples,
                   regularize, series_label, series_slug, site_slug)
from .progressive import band_names, components, smoothing_ladder
from .svg import dendrogram_svg, panels_svg
from .synthetic import SyntheticConfig, generate_synthetic, shipped_config, to_samples
from .wavelets import MODES, get_wavelet, max_level, wavedec

logger = logging.getLogger("wavecluster")


class UsageError(ValueError):
    pass


def _check_level(series, wavelet, level: int) -> None:
    w = get_wavelet(wavelet)
    for ts in series:
        top = max_level(len(ts), w)
        if level > top:
            raise UsageError(f"--level {level} too deep for {series_label(ts.key)} "
                             f"({len(ts)} days, {w.name}); max level is {top}")


def _variant_slug(variant: str) -> str:
    return variant.replace(":", "_")


def run_synth(config: SyntheticConfig, seed: int, out: Path) -> Path:
    if seed is None:
        raise UsageError("--seed is required; synthetic data is never seeded from the clock")
    series = generate_synthetic(config, seed)
    wio.write_text(out, wio.samples_csv(to_samples(series)))
    logger.info("wrote %d series to %s", len(series), out)
    return out


def run_ingest(csv_path: Path, out: Path, window: int = 10, lenient: bool = False):
    samples = read_samples(csv_path, lenient=lenient)
    series = [impute(regularize(samples, key), window) for key in group_keys(samples)]
    entries = []
    for ts in series:
        name = wio.series_filename(ts.key)
        wio.write_text(out / name, wio.series_csv(ts))
        entries.append(wio.manifest_entry(ts, name))
    # manifest last, so it never points at a file that was not written
    wio.write_json(out / wio.MANIFEST, {"window_days": window, "series": entries})
    return series


def run_decompose(series, out: Path, wavelet="db4", level: int = 3, mode="periodization"):
    _check_level(series, wavelet, level)
    for ts in series:
        slug = series_slug(ts.key)
        coeffs = wavedec(ts.values, wavelet, level, mode)
        wio.write_text(out / "coeffs" / f"{slug}.json", coeffs.to_json() + "\n")
        for band, values in components(ts.values, wavelet, level, mode).items():
            wio.write_text(out / "components" / f"{slug}_{band}.csv",
                           wio.values_csv(ts.start_date, values))
        for l, values in enumerate(smoothing_ladder(ts.values, wavelet, level, mode)):
            if l:
                wio.write_text(out / "smoothed" / f"{slug}_S{l}.csv",
                               wio.values_csv(ts.start_date, values))


def run_cluster(series, out: Path, variants, wavelet="db4", level: int = 3,
                mode="periodization"):
    _check_level(series, wavelet, level)
    for v in variants:
        parse_variant(v, level)
    results = []
    for v in variants:
        res = cluster_run(series, v, wavelet, level, mode)
        labels = [series_label(k) for k in res.keys]
        dend = replace(res.dendrogram, labels=tuple(labels))
        slug = _variant_slug(v)
        wio.write_json(out / f"dendrogram_{slug}.json", {"variant": v, **dend.to_dict()})
        wio.write_text(out / f"dendrogram_{slug}.nwk", dend.to_newick() + "\n")
        wio.write_text(out / f"dendrogram_{slug}.svg",
                       dendrogram_svg(dend, title=f"{v}: Ward linkage, correlation distance"))
        results.append(res)
    wio.write_json(out / "purity.json", [r.summary() for r in results])
    return results


def write_plots(series, out: Path, wavelet="db4", level: int = 3, mode="periodization"):
    by_site: dict[str, list] = {}
    for ts in series:
        by_site.setdefault(ts.key[0], []).append(ts)
    for site, group in by_site.items():
        prepared = [(series_label(ts.key), prepare_for_clustering(ts)) for ts in group]
        ladders = [(lab, smoothing_ladder(v, wavelet, level, mode)) for lab, v in prepared]
        panels = [(f"S{l} (standardized)", [(lab, lad[l]) for lab, lad in ladders])
                  for l in range(1, level + 1)]
        slug = site_slug(site)
        wio.write_text(out / f"{slug}_smoothed.svg",
                       panels_svg(panels, title=f"{site}: progressively smoothed signals"))
        comps = [(lab, components(v, wavelet, level, mode)) for lab, v in prepared]
        panels = [("original (standardized)", prepared)]
        panels += [(band, [(lab, c[band]) for lab, c in comps]) for band in band_names(level)]
        wio.write_text(out / f"{slug}_components.svg",
                       panels_svg(panels, title=f"{site}: band reconstructions"))


def run_pipeline(out: Path, input_csv=None, config: SyntheticConfig | None = None,
                 seed=None, wavelet="db4", level: int = 3, mode="periodization",
                 window: int = 10, variants=None, lenient: bool = False) -> dict:
    variants = list(variants or default_variants(level))
    for v in variants:
        parse_variant(v, level)
    out.mkdir(parents=True, exist_ok=True)
    source: dict = {}
    if input_csv is None:
        config = config or shipped_config("default")
        seed = config.seed if seed is None else seed
        if seed is None:
            raise UsageError("--seed is required when the config does not record one")
        input_csv = run_synth(config, seed, out / "synthetic.csv")
        source = {"synthetic_config": config.to_dict(), "seed": seed}
    else:
        source = {"input": Path(input_csv).name}
    series = run_ingest(Path(input_csv), out / "series", window, lenient)
    _check_level(series, wavelet, level)
    run_decompose(series, out / "decompose", wavelet, level, mode)
    results = run_cluster(series, out / "cluster", variants, wavelet, level, mode)
    write_plots(series, out / "plots", wavelet, level, mode)
    report = {
        "source": source,
        "wavelet": get_wavelet(wavelet).name,
        "level": level,
        "mode": mode,
        "window_days": window,
        "series": [wio.manifest_entry(ts, wio.series_filename(ts.key)) for ts in series],
        "purity": {r.variant: r.purity for r in results},
        "clusters": [r.summary() for r in results],
    }
    wio.write_json(out / "report.json", report)
    return report


def _load_config(path):
    if path is None:
        return shipped_config("default")
    try:
        return SyntheticConfig.from_json(path)
    except (OSError, ValueError, TypeError) as exc:
        raise DataError(f"cannot load synthetic config {path}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--wavelet", default="db4", help="db1..db10 (default db4)")
    common.add_argument("--level", type=int, default=3, help="decomposition depth (default 3)")
    common.add_argument("--mode", choices=MODES, default="periodization")
    common.add_argument("--window", type=int, default=10, help="imputation window in days")
    common.add_argument("--variants", default=None,
                        help="comma list: raw,S1,..,SL,coeff:cD1,..,coeff:cAL")
    common.add_argument("--lenient", action="store_true", help="skip malformed input rows")

    p = argparse.ArgumentParser(prog="wavecluster", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", parents=[common], help="write a synthetic measurement CSV")
    s.add_argument("--synthetic-config", type=Path, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--sites", type=int, default=None)
    s.add_argument("--out", type=Path, required=True)

    s = sub.add_parser("ingest", parents=[common], help="regularize and impute a CSV")
    s.add_argument("--input", type=Path, required=True)
    s.add_argument("--out", type=Path, required=True)

    for name, desc in (("decompose", "coefficient and component files"),
                       ("cluster", "dendrograms and pairing purity")):
        s = sub.add_parser(name, parents=[common], help=desc)
        s.add_argument("--input", type=Path, required=True,
                       help="directory (or manifest.json) written by ingest")
        s.add_argument("--out", type=Path, required=True)

    s = sub.add_parser("pipeline", parents=[common], help="synth/ingest -> decompose -> cluster")
    src = s.add_mutually_exclusive_group()
    src.add_argument("--input", type=Path, default=None)
    src.add_argument("--synthetic-config", type=Path, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out", type=Path, required=True)
    return p


def _dispatch(args) -> None:
    get_wavelet(args.wavelet)
    variants = args.variants.split(",") if args.variants else None
    common = dict(wavelet=args.wavelet, level=args.level, mode=args.mode)
    if args.command == "synth":
        config = _load_config(args.synthetic_config)
        if args.sites is not None:
            config = config.with_sites(args.sites)
        run_synth(config, args.seed, args.out)
    elif args.command == "ingest":
        run_ingest(args.input, args.out, args.window, args.lenient)
    elif args.command == "decompose":
        run_decompose(wio.load_series_dir(args.input), args.out, **common)
    elif args.command == "cluster":
        run_cluster(wio.load_series_dir(args.input), args.out,
                    variants or default_variants(args.level), **common)
    elif args.command == "pipeline":
        config = _load_config(args.synthetic_config) if args.input is None else None
        report = run_pipeline(args.out, args.input, config, args.seed, window=args.window,
                              variants=variants, lenient=args.lenient, **common)
        for variant, purity in report["purity"].items():
            print(f"{variant}\tpurity={purity:.2f}")


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("WAVECLUSTER_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _dispatch(args)
    except DataError as exc:
        print(f"wavecluster: data error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"wavecluster: I/O error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"wavecluster: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
