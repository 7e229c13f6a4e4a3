"""Single command-line entry point wiring all toolkit modules.

Subcommands: gen-data, train, sweep, predict, analyze, fit-ergotropy,
physics-eval, export-check.  Options can be preloaded from a key=value config
file (``--config``); explicit flags take precedence.  Every run that writes
artifacts also writes a ``run.meta`` manifest (command, config hash, seed,
versions) next to them.

Exit status: 0 on success with all artifacts validated, 1 on operational
errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys

import numpy as np

from . import __version__
from .atomdata import LevelQN, builtin_provider, check_table
from .constants import TWO_PI, OMEGA_C_REF_HZ, T0_REF_K, h
from .datagen import (
    GenerationSpec,
    INPUT_COLUMNS,
    Regime,
    TABLE_I_ATOMS,
    TARGET_COLUMNS,
    generate_dataset,
    read_dataset,
    split_dataset,
    to_arrays,
    validate_dataset,
    write_dataset,
)
from .errors import ToolkitError
from .mlp import (
    SweepSpace,
    hyperparameter_sweep,
    init_network,
    load_model,
    predict_states,
    save_model,
    scale_targets,
    train as train_network,
)
from . import analysis
from . import physics

DEFAULT_SEED = 20240


# -- config file / option resolution -----------------------------------------

def _load_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    config = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ToolkitError(f"{path}: line {lineno}: expected key=value")
            key, value = line.split("=", 1)
            config[key.strip().replace("-", "_")] = value.strip()
    return config


def _coerce(raw: str, default):
    if isinstance(default, bool) or default is None:
        return raw.lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def _resolve(args: argparse.Namespace, defaults: dict[str, object]) -> dict:
    """CLI flag > config file > builtin default, per option."""
    config = _load_config(getattr(args, "config", None))
    resolved = {}
    for dest, default in defaults.items():
        value = getattr(args, dest, None)
        if value is None:
            raw = config.get(dest)
            value = default if raw is None else _coerce(raw, default)
        resolved[dest] = value
    return resolved


def _config_hash(options: dict) -> str:
    canon = "\n".join(f"{k}={options[k]}" for k in sorted(options))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _write_meta(directory: str, command: str, options: dict, seed) -> None:
    os.makedirs(directory or ".", exist_ok=True)
    path = os.path.join(directory or ".", "run.meta")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"command={command}\n")
        fh.write(f"config_hash={_config_hash(options)}\n")
        fh.write(f"seed={seed}\n")
        fh.write(f"eitqhe_version={__version__}\n")
        fh.write(f"python={sys.version_info.major}.{sys.version_info.minor}"
                 f".{sys.version_info.micro}\n")
        fh.write(f"numpy={np.__version__}\n")


def _check_conflicts(inputs: list[str], outputs: list[str], force: bool) -> None:
    ins = {os.path.abspath(p) for p in inputs if p}
    for out in outputs:
        if out and os.path.abspath(out) in ins and not force:
            raise ToolkitError(
                f"output {out} would overwrite an input (use --force to allow)"
            )


def _parse_atoms(spec: str) -> tuple[tuple[int, int], ...]:
    atoms = []
    for chunk in spec.split(","):
        z, _, a = chunk.partition(":")
        if not a:
            raise ToolkitError(f"bad atom spec {chunk!r}; expected Z:A")
        atoms.append((int(z), int(a)))
    return tuple(atoms)


def _parse_level(text: str) -> LevelQN:
    parts = text.split(",")
    if len(parts) != 3:
        raise ToolkitError(f"bad level {text!r}; expected n,l,j")
    return LevelQN.from_j(int(parts[0]), int(parts[1]), float(parts[2]))


# -- prediction CSV handling --------------------------------------------------

RAW_COLUMNS = tuple(f"raw_{c}" for c in TARGET_COLUMNS)
PRED_COLUMNS = tuple(f"pred_{c}" for c in TARGET_COLUMNS)


def _read_csv_columns(path: str) -> tuple[list[str], list[list[str]]]:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    return header, rows


# -- subcommand implementations ----------------------------------------------

def _cmd_gen_data(args) -> int:
    opts = _resolve(args, {
        "atoms": ",".join(f"{z}:{a}" for z, a in TABLE_I_ATOMS),
        "count": 300_000,  # desk-scale default (metric-saturation size)
        "seed": DEFAULT_SEED,
        "out": "dataset.csv",
        "workers": 1,
        "policy": "permissive",
        "waist": 50e-6,
        "omega_c_zero": False,
        "force": False,
    })
    _check_conflicts([], [opts["out"]], opts["force"])
    spec = GenerationSpec(
        count=opts["count"],
        seed=opts["seed"],
        atoms=_parse_atoms(opts["atoms"]),
        waist=opts["waist"],
        policy=opts["policy"],
        omega_c_override=0.0 if opts["omega_c_zero"] else None,
    )
    records, report = generate_dataset(spec, workers=opts["workers"])
    write_dataset(records, opts["out"])
    report.write(opts["out"] + ".report.txt")
    n = validate_dataset(opts["out"])
    _write_meta(os.path.dirname(opts["out"]), "gen-data", opts, opts["seed"])
    print(f"wrote {n} records to {opts['out']}")
    return 0


def _cmd_train(args) -> int:
    opts = _resolve(args, {
        "data": None,
        "layers": "128,128",
        "act": "tanh",
        "lr": 0.01,
        "epochs": 100,
        "batch": 256,
        "split": 0.8,
        "patience": 10,
        "seed": DEFAULT_SEED,
        "out": "model.txt",
        "history": "",
        "force": False,
    })
    if not opts["data"]:
        raise ToolkitError("train requires --data")
    _check_conflicts([opts["data"]], [opts["out"]], opts["force"])
    records = read_dataset(opts["data"])
    train_recs, val_recs = split_dataset(records, opts["split"], opts["seed"])
    x_train, y_train = to_arrays(train_recs)
    x_val, y_val = to_arrays(val_recs)
    # regression runs on min-max normalized quantum numbers; loss and MAE in
    # the history are therefore dimensionless
    y_train_s, y_val_s = scale_targets(y_train), scale_targets(y_val)
    hidden = tuple(int(w) for w in opts["layers"].split(",") if w)
    model = init_network((9, *hidden, 6), opts["act"], opts["seed"],
                         target_scaling="minmax")
    model, history = train_network(
        model, (x_train, y_train_s), (x_val, y_val_s),
        epochs=opts["epochs"], batch_size=opts["batch"], lr=opts["lr"],
        seed=opts["seed"], patience=opts["patience"],
    )
    history.meta["target_scaling"] = "minmax"
    save_model(model, opts["out"])
    history_path = opts["history"] or opts["out"] + ".history.csv"
    history.write_csv(history_path)
    # artifact validation: reload and compare one forward pass
    reloaded = load_model(opts["out"])
    probe = x_val[:1]
    from .mlp import forward

    if not np.allclose(forward(model, probe), forward(reloaded, probe), atol=0.0):
        raise ToolkitError("model round-trip validation failed")
    _write_meta(os.path.dirname(opts["out"]), "train", opts, opts["seed"])
    final = history.final()
    print(
        f"trained {opts['layers']} {opts['act']} lr={opts['lr']}: "
        f"val_loss={final['val_loss']:.6f} val_mae={final['val_mae']:.6f} "
        f"({len(history.epochs)} epochs)"
    )
    return 0


def _parse_space_file(path: str | None) -> SweepSpace:
    if not path:
        return SweepSpace()
    raw = _load_config(path)
    kwargs = {}
    if "depths" in raw:
        kwargs["depths"] = tuple(int(d) for d in raw["depths"].split(","))
    if "widths" in raw:
        kwargs["widths"] = tuple(int(w) for w in raw["widths"].split(","))
    if "lrs" in raw:
        kwargs["lrs"] = tuple(float(x) for x in raw["lrs"].split(","))
    if "acts" in raw:
        kwargs["activations"] = tuple(a.strip() for a in raw["acts"].split(","))
    if "extra_layouts" in raw:
        kwargs["extra_layouts"] = tuple(
            tuple(int(w) for w in layout.split("x"))
            for layout in raw["extra_layouts"].split(";")
            if layout
        )
    return SweepSpace(**kwargs)


def _cmd_sweep(args) -> int:
    opts = _resolve(args, {
        "data": None,
        "space": "",
        "sizes": "",
        "epochs": 20,
        "batch": 256,
        "split": 0.8,
        "patience": 10,
        "seed": DEFAULT_SEED,
        "out": "sweep_out",
        "force": False,
    })
    if not opts["data"]:
        raise ToolkitError("sweep requires --data")
    records = read_dataset(opts["data"])
    train_recs, val_recs = split_dataset(records, opts["split"], opts["seed"])
    space = _parse_space_file(opts["space"])
    sizes = tuple(int(s) for s in opts["sizes"].split(",") if s)
    x_train, y_train = to_arrays(train_recs)
    x_val, y_val = to_arrays(val_recs)
    result = hyperparameter_sweep(
        (x_train, scale_targets(y_train)), (x_val, scale_targets(y_val)),
        space, sizes=sizes,
        epochs=opts["epochs"], batch_size=opts["batch"], base_seed=opts["seed"],
        patience=opts["patience"],
    )
    os.makedirs(opts["out"], exist_ok=True)
    result.write_csv(os.path.join(opts["out"], "sweep.csv"))
    if sizes:
        result.write_size_study_csv(os.path.join(opts["out"], "size_study.csv"))
    with open(os.path.join(opts["out"], "best.txt"), "w", encoding="utf-8") as fh:
        fh.write(f"best={result.best.config.tag()}\n")
        fh.write(f"val_loss={result.best.val_loss!r}\n")
        fh.write(f"val_mae={result.best.val_mae!r}\n")
        fh.write(f"two_hidden_layers_best_mae={result.two_hidden_layers_best_mae()}\n")
    _write_meta(opts["out"], "sweep", opts, opts["seed"])
    print(f"best config: {result.best.config.tag()} "
          f"(val_loss={result.best.val_loss:.6f})")
    if not result.two_hidden_layers_best_mae():
        print("note: 2-hidden-layer family did not achieve the lowest val MAE")
    return 0


def _cmd_predict(args) -> int:
    opts = _resolve(args, {
        "model": None,
        "in_path": None,
        "out": "predictions.csv",
        "force": False,
    })
    if not opts["model"] or not opts["in_path"]:
        raise ToolkitError("predict requires --model and --in")
    _check_conflicts([opts["model"], opts["in_path"]], [opts["out"]], opts["force"])
    model = load_model(opts["model"])
    header, rows = _read_csv_columns(opts["in_path"])
    try:
        input_idx = [header.index(c) for c in INPUT_COLUMNS]
    except ValueError as exc:
        raise ToolkitError(f"{opts['in_path']}: missing input column ({exc})")
    out_header = header + list(RAW_COLUMNS) + list(PRED_COLUMNS)
    with open(opts["out"], "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(out_header) + "\n")
        for row in rows:
            x = np.array([float(row[i]) for i in input_idx])
            raw, rounded = predict_states(model, x)
            fh.write(",".join(
                row
                + [repr(float(v)) for v in raw]
                + [str(v) if isinstance(v, int) else repr(v) for v in rounded]
            ) + "\n")
    _write_meta(os.path.dirname(opts["out"]), "predict", opts, model.seed)
    print(f"wrote predictions for {len(rows)} rows to {opts['out']}")
    return 0


def _engines_from_prediction_rows(header, rows, policy):
    idx = {name: header.index(name) for name in header}
    needed = list(INPUT_COLUMNS) + list(PRED_COLUMNS)
    missing = [c for c in needed if c not in idx]
    if missing:
        raise ToolkitError(f"prediction file lacks columns {missing}")
    engines = []
    for row in rows:
        get = lambda c: float(row[idx[c]])
        level1 = LevelQN.from_j(int(get("n1")), int(get("l1")), get("j1"))
        level2 = LevelQN.from_j(
            int(get("pred_n2")), int(get("pred_l2")), get("pred_j2")
        )
        level3 = LevelQN.from_j(
            int(get("pred_n3")), int(get("pred_l3")), get("pred_j3")
        )
        engines.append(
            analysis.PredictedEngine(
                z=int(get("z")),
                a=int(get("a")),
                level1=level1,
                level2=level2,
                level3=level3,
                omega_c=get("omega_c_s") * OMEGA_C_REF_HZ * TWO_PI,
                t0=get("t0_s") * T0_REF_K,
                t_ratio=get("t_ratio"),
            )
        )
    return engines


def _cmd_analyze(args) -> int:
    opts = _resolve(args, {
        "pred": None,
        "regime": "low",
        "out": "analysis_out",
        "svg": False,
        "policy": "permissive",
        "curve_engine": 0,
        "curve_min_hz": 1e7,
        "curve_max_hz": 1e9,
        "curve_points": 40,
        "seed": DEFAULT_SEED,
        "force": False,
    })
    if not opts["pred"]:
        raise ToolkitError("analyze requires --pred")
    regime = Regime(opts["regime"])
    header, rows = _read_csv_columns(opts["pred"])
    engines = _engines_from_prediction_rows(header, rows, opts["policy"])
    selected = analysis.select_common_engines(engines, regime)
    providers = {}
    for eng in selected:
        providers.setdefault(
            (eng.z, eng.a), builtin_provider(eng.z, eng.a, policy=opts["policy"])
        )
    comparison = analysis.compare_atoms(selected, providers)
    os.makedirs(opts["out"], exist_ok=True)
    analysis.write_comparison_csv(
        comparison, os.path.join(opts["out"], "comparison.csv")
    )
    print(f"{len(selected)} common engines in regime {regime.value}")
    usable = [i for i, row in enumerate(comparison) if row.status == "ok"]
    if usable:
        k = usable[min(max(opts["curve_engine"], 0), len(usable) - 1)]
        engine = selected[k]
        provider = providers[(engine.z, engine.a)]
        grid_hz = np.geomspace(
            opts["curve_min_hz"], opts["curve_max_hz"], opts["curve_points"]
        )
        curve = analysis.ergotropy_curve(engine, provider, grid_hz * TWO_PI)
        analysis.write_curve_csv(curve, os.path.join(opts["out"], "curve.csv"))
        print(
            f"ergotropy saturation within grid: {curve[-1, 1]:.6e} J "
            f"({curve[-1, 1] / h:.6e} Hz)"
        )
        fit = analysis.fit_exponential(curve[:, 0] / TWO_PI, curve[:, 1] / h)
        fit.write(os.path.join(opts["out"], "fit.txt"))
        if opts["svg"]:
            from . import plots

            plots.line_svg(
                curve[:, 0] / TWO_PI, curve[:, 1] / h,
                "omega_c (Hz)", "ergotropy (Hz)",
                os.path.join(opts["out"], "curve.svg"), logx=True,
            )
    # error report when the file carries both targets and raw predictions
    have = set(header)
    if have.issuperset(TARGET_COLUMNS) and have.issuperset(RAW_COLUMNS):
        idx = {name: header.index(name) for name in header}
        actual = np.array(
            [[float(r[idx[c]]) for c in TARGET_COLUMNS] for r in rows]
        )
        raw = np.array([[float(r[idx[c]]) for c in RAW_COLUMNS] for r in rows])
        report = analysis.prediction_error_report(actual, raw)
        analysis.write_scatter_csv(
            report, os.path.join(opts["out"], "predictions_scatter.csv")
        )
        for name, comp in report.items():
            comp.write_csv(os.path.join(opts["out"], f"errors_{name}.csv"))
            if opts["svg"]:
                from . import plots

                plots.bars_svg(
                    comp.bin_centers, comp.counts, f"{name} error",
                    os.path.join(opts["out"], f"errors_{name}.svg"),
                )
                plots.scatter_svg(
                    comp.actual, comp.predicted, f"{name} actual",
                    f"{name} predicted",
                    os.path.join(opts["out"], f"scatter_{name}.svg"),
                )
    _write_meta(opts["out"], "analyze", opts, opts["seed"])
    return 0


def _cmd_fit_ergotropy(args) -> int:
    opts = _resolve(args, {
        "curve": None,
        "out": "fit.txt",
        "units": "hz",
        "force": False,
    })
    if not opts["curve"]:
        raise ToolkitError("fit-ergotropy requires --curve")
    _check_conflicts([opts["curve"]], [opts["out"]], opts["force"])
    omega_hz, eps_j, eps_hz = analysis.read_curve_csv(opts["curve"])
    y = eps_hz if opts["units"] == "hz" else eps_j
    fit = analysis.fit_exponential(omega_hz, y)
    fit.write(opts["out"])
    _write_meta(os.path.dirname(opts["out"]), "fit-ergotropy", opts, DEFAULT_SEED)
    print(
        f"fit: a={fit.a:.6e} b={fit.b:.6e} c={fit.c:.6e} "
        f"r2={fit.r_squared:.6f} converged={fit.converged}"
    )
    return 0


def _cmd_physics_eval(args) -> int:
    opts = _resolve(args, {
        "atom": "",
        "levels": "",
        "t0": 300.0,
        "omega_c": None,       # Hz
        "power": None,
        "waist": 50e-6,
        "gamma31": None,
        "gamma32": None,
        "omega13": None,       # Hz
        "omega23": None,       # Hz
        "policy": "permissive",
        "entropy_convention": "main",
        "out": "",
        "force": False,
    })
    lines = []
    if opts["atom"]:
        if not opts["levels"]:
            raise ToolkitError("atom mode requires --levels 'n,l,j;n,l,j;n,l,j'")
        (z, a), = _parse_atoms(opts["atom"])
        provider = builtin_provider(z, a, policy=opts["policy"])
        levels = [_parse_level(t) for t in opts["levels"].split(";")]
        if len(levels) != 3:
            raise ToolkitError("need exactly three levels")
        if opts["omega_c"] is not None:
            omega_c = opts["omega_c"] * TWO_PI
        elif opts["power"] is not None:
            omega_c = provider.rabi_frequency(
                levels[1], levels[2], opts["power"], opts["waist"]
            )
        else:
            raise ToolkitError("atom mode requires --omega-c or --power")
        config = physics.EngineConfig.create(
            provider, *levels, omega_c=omega_c, t0=opts["t0"],
            power=opts["power"] or 0.0, waist=opts["waist"],
        )
        obs = physics.evaluate_engine(
            config, provider, entropy_convention=opts["entropy_convention"]
        )
        lines.append(f"atom={provider.spec.name}")
        lines.append(f"omega_c_hz={omega_c / TWO_PI!r}")
    else:
        required = ("gamma31", "gamma32", "omega13", "omega23", "omega_c")
        if any(opts[k] is None for k in required):
            raise ToolkitError(
                "raw mode requires --gamma31 --gamma32 --omega13 --omega23 --omega-c"
            )
        rates = physics.RateSet.build(
            opts["gamma31"], opts["gamma32"],
            physics.thermal_occupation(opts["omega13"] * TWO_PI, opts["t0"]),
            physics.thermal_occupation(opts["omega23"] * TWO_PI, opts["t0"]),
        )
        omega_c = opts["omega_c"] * TWO_PI
        rho11, rho22, rho33 = physics.steady_state_populations(
            rates.r13, rates.r23, omega_c
        )
        pop_diff = physics.rate_model_population_difference(
            rates.r13, rates.r23, omega_c
        )
        eps = physics.hbar * opts["omega23"] * TWO_PI * pop_diff
        nan = float("nan")
        try:
            theta = physics.theta_closed_form(rates, omega_c)
        except ToolkitError:
            theta = nan
        try:
            b0 = physics.brightness_line_center(rates, omega_c)
            t_out, t_ratio = physics.output_temperature(
                b0, opts["omega13"] * TWO_PI, opts["t0"]
            )
            work, delta_e, t_delta_s, tb = physics.work_and_entropy(
                opts["omega13"] * TWO_PI, opts["omega23"] * TWO_PI,
                opts["t0"], t_out, convention=opts["entropy_convention"],
            )
            gain = False
        except ToolkitError:
            b0 = t_out = t_ratio = work = t_delta_s = nan
            delta_e = physics.hbar * opts["omega13"] * TWO_PI
            tb = opts["t0"] * opts["omega13"] / (opts["omega13"] - opts["omega23"])
            gain = True
        obs = physics.EngineObservables(
            rho11, rho22, rho33, theta, b0, t_out, t_ratio,
            work, t_delta_s, delta_e, eps, tb, pop_diff, gain,
        )
        lines.append(f"omega_c_hz={opts['omega_c']!r}")
    lines += [
        f"rho11={obs.rho11!r}",
        f"rho22={obs.rho22!r}",
        f"rho33={obs.rho33!r}",
        f"theta={obs.theta!r}",
        f"b0={obs.b0!r}",
        f"t_out_k={obs.t_out!r}",
        f"t_ratio={obs.t_ratio!r}",
        f"work_j={obs.work!r}",
        f"t_delta_s_j={obs.t_delta_s!r}",
        f"delta_e_j={obs.delta_e!r}",
        f"ergotropy_j={obs.ergotropy!r}",
        f"ergotropy_hz={obs.ergotropy_hz!r}",
        f"tb_bound_k={obs.tb_bound!r}",
        f"gain={obs.gain}",
    ]
    print("\n".join(lines))
    if opts["out"]:
        with open(opts["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        _write_meta(os.path.dirname(opts["out"]), "physics-eval", opts,
                    DEFAULT_SEED)
    return 0


def _cmd_export_check(args) -> int:
    opts = _resolve(args, {"table": None})
    if not opts["table"]:
        raise ToolkitError("export-check requires --table")
    summary = check_table(opts["table"])
    print(
        f"{opts['table']}: OK "
        f"({summary['levels']} levels, {summary['transitions']} transitions, "
        f"atoms {summary['atoms']})"
    )
    return 0


# -- argument parser ----------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--config", help="key=value config file with option defaults")
    sub.add_argument("--force", action="store_true", default=None,
                     help="allow outputs to overwrite inputs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eitqhe",
        description="EIT quantum-heat-engine toolkit "
                    f"(v{__version__}, default seed {DEFAULT_SEED})",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("gen-data", help="generate a labeled dataset")
    p.add_argument("--atoms", help="comma list of Z:A pairs")
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--policy", choices=("permissive", "strict"))
    p.add_argument("--waist", type=float)
    p.add_argument("--omega-c-zero", dest="omega_c_zero", action="store_true",
                   default=None, help="debug: force the coupling off")
    _add_common(p)
    p.set_defaults(func=_cmd_gen_data)

    p = subs.add_parser("train", help="train the feedforward network")
    p.add_argument("--data")
    p.add_argument("--layers")
    p.add_argument("--act", choices=("tanh", "relu"))
    p.add_argument("--lr", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch", type=int)
    p.add_argument("--split", type=float)
    p.add_argument("--patience", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--history")
    _add_common(p)
    p.set_defaults(func=_cmd_train)

    p = subs.add_parser("sweep", help="hyperparameter sweep and size study")
    p.add_argument("--data")
    p.add_argument("--space", help="key=value sweep space file")
    p.add_argument("--sizes", help="comma list of dataset sizes")
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch", type=int)
    p.add_argument("--split", type=float)
    p.add_argument("--patience", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_sweep)

    p = subs.add_parser("predict", help="predict excited states for a CSV")
    p.add_argument("--model")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_predict)

    p = subs.add_parser("analyze", help="compare predicted engines in a regime")
    p.add_argument("--pred")
    p.add_argument("--regime", choices=("low", "mid", "high"))
    p.add_argument("--out")
    p.add_argument("--svg", action="store_true", default=None)
    p.add_argument("--policy", choices=("permissive", "strict"))
    p.add_argument("--curve-engine", dest="curve_engine", type=int)
    p.add_argument("--curve-min-hz", dest="curve_min_hz", type=float)
    p.add_argument("--curve-max-hz", dest="curve_max_hz", type=float)
    p.add_argument("--curve-points", dest="curve_points", type=int)
    p.add_argument("--seed", type=int)
    _add_common(p)
    p.set_defaults(func=_cmd_analyze)

    p = subs.add_parser("fit-ergotropy", help="fit the saturating exponential")
    p.add_argument("--curve")
    p.add_argument("--out")
    p.add_argument("--units", choices=("hz", "j"))
    _add_common(p)
    p.set_defaults(func=_cmd_fit_ergotropy)

    p = subs.add_parser("physics-eval", help="evaluate one engine instance")
    p.add_argument("--atom", help="Z:A (atom mode)")
    p.add_argument("--levels", help="'n,l,j;n,l,j;n,l,j' (atom mode)")
    p.add_argument("--t0", type=float)
    p.add_argument("--omega-c", dest="omega_c", type=float, help="Hz")
    p.add_argument("--power", type=float, help="W (atom mode alternative)")
    p.add_argument("--waist", type=float)
    p.add_argument("--gamma31", type=float, help="s^-1 (raw mode)")
    p.add_argument("--gamma32", type=float, help="s^-1 (raw mode)")
    p.add_argument("--omega13", type=float, help="Hz (raw mode)")
    p.add_argument("--omega23", type=float, help="Hz (raw mode)")
    p.add_argument("--policy", choices=("permissive", "strict"))
    p.add_argument("--entropy-convention", dest="entropy_convention",
                   choices=("main", "supplementary"))
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_physics_eval)

    p = subs.add_parser("export-check", help="validate an atomdata v1 table")
    p.add_argument("--table")
    _add_common(p)
    p.set_defaults(func=_cmd_export_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
