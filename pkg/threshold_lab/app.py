"""
The command-line application: parses flags into an ExperimentConfig, runs
the mapped command, writes the artifacts and replays finished runs.
"""

import argparse
import logging
import tempfile
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import yaml
from pydantic import ValidationError

from threshold_lab import __version__
from threshold_lab.api import api_router
from threshold_lab.core import settings
from threshold_lab.core.exceptions import (
    EXIT_ERROR,
    ConfigInvalid,
    ReplayMismatch,
    ThresholdLabError,
)
from threshold_lab.crud import ArtifactStore
from threshold_lab.crud.base import CONFIG_FILE, config_error, load_document, sha256
from threshold_lab.api.router import RunContext
from threshold_lab.schemas.config import ExperimentConfig, RunManifest

logger = logging.getLogger(__name__)

VERSIONED_MODULES = ["numpy", "scipy", "pandas", "pydantic", "pyomo", "highspy", "joblib"]
# Flags copied into params when given
PARAM_FLAGS = ["family", "n", "k", "m", "p", "tol"]


def module_versions() -> Dict[str, str]:
    versions = {"threshold-lab": __version__}
    for name in VERSIONED_MODULES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "missing"
    return versions


def _set_dotted(target: Dict[str, Any], key: str, value: Any) -> None:
    *parents, leaf = key.split(".")
    for part in parents:
        target = target.setdefault(part, {})
        if not isinstance(target, dict):
            raise ConfigInvalid(f"{part} is not a mapping", path=key)
    target[leaf] = value


def params_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    """
    Parameters of a subcommand from its flags. Later sources win: the
    params file, then the named flags, then the family file, then --set.
    """
    params: Dict[str, Any] = load_document(args.params_file) if args.params_file else {}
    for flag in PARAM_FLAGS:
        value = getattr(args, flag)
        if value is not None:
            params[flag] = value
    if args.family_file:
        params["family"] = load_document(args.family_file)
    for assignment in args.set or []:
        key, sep, text = assignment.partition("=")
        if not sep or not key:
            raise ConfigInvalid(f"--set expects key=value, got {assignment!r}")
        _set_dotted(params, key, yaml.safe_load(text))
    return params


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    if args.seed is None:
        raise ConfigInvalid("an explicit --seed is required", path="master_seed")
    data = {
        "subcommand": args.command,
        "params": params_from_args(args),
        "master_seed": args.seed,
        "output_path": args.out or str(Path(settings.OUTPUT_DIR) / args.command),
        "format": args.format,
    }
    if args.trials is not None:
        data["trials"] = args.trials
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise config_error(e)


def run(config: ExperimentConfig, threads: Optional[int] = None) -> int:
    """
    Validates the parameters, runs the command and writes the artifacts.
    Nothing is written unless the parameters validate.
    """
    if config.subcommand not in api_router:
        raise ConfigInvalid(f"unknown command {config.subcommand!r}", path="subcommand")
    command = api_router.get(config.subcommand)
    try:
        params = command.params.model_validate(config.params)
    except ValidationError as e:
        raise config_error(e, prefix="params")

    threads = threads or settings.THRESHOLDLAB_THREADS
    started = datetime.now(timezone.utc)
    logger.info(f"Running {config.subcommand} with seed {config.master_seed} on {threads} thread(s)")
    result = command.handler(params, RunContext(config.master_seed, config.trials, threads))
    finished = datetime.now(timezone.utc)

    store = ArtifactStore(config.output_path)
    config_hash = store.write_config(config)
    store.write_summary(
        {
            "subcommand": config.subcommand,
            "params": config.params,
            "master_seed": config.master_seed,
            "trials": config.trials,
            "status": result.status,
            "result": result.summary.model_dump(mode="json"),
        }
    )
    store.write_trials(result.records, config.format)
    store.write_manifest(
        RunManifest(
            config_hash=config_hash,
            version=__version__,
            started=started,
            finished=finished,
            module_versions=module_versions(),
            data_files=store.data_files(),
            exit_status=result.status,
            threads=threads,
        )
    )
    logger.info(f"Wrote artifacts to {store.root} with status {result.status}")
    return result.status


def _first_difference(name: str, expected: bytes, actual: bytes) -> str:
    old, new = expected.decode().splitlines(), actual.decode().splitlines()
    for line, (a, b) in enumerate(zip(old, new), start=1):
        if a != b:
            return f"{name} line {line}: expected {a!r}, got {b!r}"
    return f"{name}: {len(old)} lines expected, got {len(new)}"


def replay(manifest_path: str, threads: Optional[int] = None) -> int:
    """Reruns a finished run and byte-compares its data files."""
    manifest = ArtifactStore.read_manifest(manifest_path)
    run_dir = Path(manifest_path).parent
    config_path = run_dir / CONFIG_FILE
    if not config_path.exists() or sha256(config_path) != manifest.config_hash:
        raise ConfigInvalid("hash does not match the manifest", path=str(config_path))
    config = ArtifactStore.read_config(config_path)
    with tempfile.TemporaryDirectory() as tmp:
        status = run(config.model_copy(update={"output_path": tmp}), threads=threads)
        for name in manifest.data_files:
            rerun = Path(tmp) / name
            if not rerun.exists():
                raise ReplayMismatch(f"{name}: missing from the replay")
            expected, actual = (run_dir / name).read_bytes(), rerun.read_bytes()
            if expected != actual:
                raise ReplayMismatch(_first_difference(name, expected, actual))
        extra = set(ArtifactStore(tmp).data_files()) - set(manifest.data_files)
        if extra:
            raise ReplayMismatch(f"replay wrote unexpected files {sorted(extra)}")
    if status != manifest.exit_status:
        raise ReplayMismatch(f"exit status {status}, the run reported {manifest.exit_status}")
    logger.info(f"Replay of {run_dir} matched {len(manifest.data_files)} data file(s)")
    return status


def _command_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="64-bit master seed (required)")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials (per level for thresholds)")
    parser.add_argument("--threads", type=int, help="worker threads; defaults to THRESHOLDLAB_THREADS")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", choices=["csv", "json"], default="csv", help="per-trial file format")
    parser.add_argument("--family", help="builtin family name, e.g. triangle-free")
    parser.add_argument("--n", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--p", type=float)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--family-file", help="JSON or YAML family spec")
    parser.add_argument("--params-file", help="JSON or YAML mapping of parameters")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE", help="set a parameter (dotted keys nest)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="threshold-lab", description=settings.PROJECT_NAME)
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, command in api_router.commands.items():
        _command_flags(subparsers.add_parser(name, help=command.help.splitlines()[0] if command.help else None))
    run_parser = subparsers.add_parser("run", help="run an experiment config file")
    run_parser.add_argument("--config", required=True)
    run_parser.add_argument("--threads", type=int)
    replay_parser = subparsers.add_parser("replay", help="rerun a finished run and compare its data files")
    replay_parser.add_argument("manifest")
    replay_parser.add_argument("--threads", type=int)
    return parser


def exception_handler(exc: Exception) -> int:
    if isinstance(exc, ThresholdLabError):
        logger.error(f"{type(exc).__name__}: {exc}")
        return exc.exit_status
    if isinstance(exc, ValueError):
        logger.error(f"Invalid input: {exc}")
        return EXIT_ERROR
    logger.exception(exc)
    return EXIT_ERROR


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None and args.threads < 1:
        return exception_handler(ConfigInvalid("--threads must be at least 1", path="threads"))
    try:
        if args.command == "run":
            return run(ArtifactStore.read_config(args.config), threads=args.threads)
        if args.command == "replay":
            return replay(args.manifest, threads=args.threads)
        return run(config_from_args(args), threads=args.threads)
    except Exception as e:
        return exception_handler(e)
