import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd
import pyaml
import yaml
from pydantic import ValidationError

from threshold_lab.core.exceptions import ConfigInvalid
from threshold_lab.schemas.config import ExperimentConfig, RunManifest

CONFIG_FILE = "config.json"
SUMMARY_FILE = "summary.json"
MANIFEST_FILE = "manifest.yaml"


def canonical_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=True) + "\n"


def sha256(path: Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def config_error(error: ValidationError, prefix: str = "") -> ConfigInvalid:
    """ConfigInvalid for the first error of a validation, located by its dotted path."""
    first = error.errors()[0]
    location = ".".join([prefix] * bool(prefix) + [str(part) for part in first["loc"]])
    return ConfigInvalid(first["msg"], path=location)


def load_document(path: Union[str, Path]) -> Dict[str, Any]:
    """Reads a JSON or YAML document (JSON being a subset of YAML)."""
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as e:
        raise ConfigInvalid(f"cannot read {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigInvalid(f"{path} does not hold a mapping")
    return data


class ArtifactStore:
    """
    The single writer of a run directory:

    * ``config.json``   the experiment config, verbatim
    * ``summary.json``  aggregates with provenance
    * ``trials.csv``    one row per trial (``trials.json`` with format json)
    * ``manifest.yaml`` config hash, versions, timings and data file hashes

    The directory is created on the first write only.
    """

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)

    def _path(self, name: str) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        return self.root / name

    def write_config(self, config: ExperimentConfig) -> str:
        path = self._path(CONFIG_FILE)
        path.write_text(canonical_json(config.model_dump(mode="json")))
        return sha256(path)

    def write_summary(self, summary: Dict[str, Any]) -> Path:
        path = self._path(SUMMARY_FILE)
        path.write_text(canonical_json(summary))
        return path

    def write_trials(self, records: List[Dict[str, Any]], format: str = "csv") -> Optional[Path]:
        """Column order is the key order of the first record."""
        if not records:
            return None
        frame = pd.DataFrame.from_records(records, columns=list(records[0].keys()))
        if format == "json":
            path = self._path("trials.json")
            path.write_text(frame.to_json(orient="records", indent=2, double_precision=15) + "\n")
        else:
            path = self._path("trials.csv")
            frame.to_csv(path, index=False, lineterminator="\n")
        return path

    def write_manifest(self, manifest: RunManifest) -> Path:
        path = self._path(MANIFEST_FILE)
        with path.open("w") as dst:
            pyaml.dump(manifest.model_dump(mode="json"), dst)
        return path

    def data_files(self) -> Dict[str, str]:
        names = [SUMMARY_FILE, "trials.csv", "trials.json"]
        return {name: sha256(self.root / name) for name in names if (self.root / name).exists()}

    @staticmethod
    def read_config(path: Union[str, Path]) -> ExperimentConfig:
        data = load_document(path)
        try:
            return ExperimentConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigInvalid(str(config_error(e)), path=str(path))

    @staticmethod
    def read_manifest(path: Union[str, Path]) -> RunManifest:
        data = load_document(path)
        try:
            return RunManifest.model_validate(data)
        except ValidationError as e:
            raise ConfigInvalid(str(config_error(e)), path=str(path))
