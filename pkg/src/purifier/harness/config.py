"""Run configuration (JSON). Defaults are always written back out in full."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from ..core import retained_count
from ..datagen import SyntheticConfig
from ..errors import ConfigError, PurifierError
from ..scorers import ScorerConfig
from .io import SCHEMA_VERSION, read_json

DEFAULT_K_LIST = (1, 3, 5, 7)
DEFAULT_ALPHA_LIST = (0.0, 0.1, 0.2, 0.4)
DEFAULT_SEED_LIST = tuple(range(10))

_TOP_FIELDS = {
    "schema_version", "dataset", "k", "t", "stage1_scorer", "stage2_scorer",
    "master_seed", "exclude_native", "normalize", "sweep", "output_dir", "pure_path",
}


@dataclass
class RunConfig:
    synthetic: SyntheticConfig | None = field(default_factory=SyntheticConfig)
    # file paths are kept as written and resolved against base_dir
    train_path: str | None = None
    test_path: str | None = None
    k: int = 5
    t: float = 0.40
    stage1_scorer: ScorerConfig = field(default_factory=ScorerConfig)
    stage2_scorer: ScorerConfig | None = None
    master_seed: int = 0
    exclude_native: bool = False
    normalize: bool = False
    k_list: tuple = DEFAULT_K_LIST
    alpha_list: tuple = DEFAULT_ALPHA_LIST
    seed_list: tuple = DEFAULT_SEED_LIST
    output_dir: Path = Path("out")
    pure_path: str | None = None
    base_dir: Path = Path(".")

    def __post_init__(self):
        if self.stage2_scorer is None:
            self.stage2_scorer = self.stage1_scorer
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise ConfigError(f"k: must be a positive integer, got {self.k!r}")
        try:
            retained_count(1, self.t)
        except PurifierError:
            raise ConfigError(f"t: must lie in (0, 1], got {self.t!r}") from None
        if not (0 <= int(self.master_seed) < 2**64):
            raise ConfigError(f"master_seed: must be an unsigned 64-bit integer, got {self.master_seed}")
        if self.synthetic is None and self.train_path is None:
            raise ConfigError("dataset: need either 'synthetic' or 'train_path'")
        for name in ("k_list", "alpha_list", "seed_list"):
            if not getattr(self, name):
                raise ConfigError(f"sweep.{name}: must be non-empty")
        if any(isinstance(k, bool) or not isinstance(k, int) or k < 1 for k in self.k_list):
            raise ConfigError(f"sweep.k_list: entries must be positive integers, got {list(self.k_list)}")
        if any(not (0 <= a < 1) for a in self.alpha_list):
            raise ConfigError(f"sweep.alpha_list: entries must lie in [0, 1), got {list(self.alpha_list)}")
        if any(isinstance(s, bool) or not isinstance(s, int) or not (0 <= s < 2**64) for s in self.seed_list):
            raise ConfigError("sweep.seed_list: entries must be unsigned 64-bit integers")

    def resolve(self, p: str | None) -> Path | None:
        return None if p is None else Path(self.base_dir) / p

    def with_seed(self, seed: int) -> "RunConfig":
        """Apply a --seed override: master seed, dataset seed and sweep seeds."""
        syn = self.synthetic and dataclasses.replace(self.synthetic, seed=seed)
        return dataclasses.replace(self, master_seed=seed, synthetic=syn, seed_list=(seed,))

    def to_dict(self) -> dict:
        if self.synthetic is not None:
            dataset = {"synthetic": self.synthetic.to_dict()}
        else:
            dataset = {"train_path": self.train_path, "test_path": self.test_path}
        return {
            "dataset": dataset,
            "k": self.k,
            "t": self.t,
            "stage1_scorer": self.stage1_scorer.to_dict(),
            "stage2_scorer": self.stage2_scorer.to_dict(),
            "master_seed": int(self.master_seed),
            "exclude_native": self.exclude_native,
            "normalize": self.normalize,
            "sweep": {
                "k_list": list(self.k_list),
                "alpha_list": list(self.alpha_list),
                "seed_list": list(self.seed_list),
            },
            "pure_path": self.pure_path,
        }


def _section(fn, name, value):
    if not isinstance(value, dict):
        raise ConfigError(f"{name}: must be an object")
    try:
        return fn(value)
    except ConfigError as exc:
        raise ConfigError(f"{name}: {exc}") from None
    except TypeError as exc:
        raise ConfigError(f"{name}: {exc}") from None


def config_from_dict(doc: dict, base_dir: Path | None = None) -> RunConfig:
    base_dir = Path(base_dir or ".")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise ConfigError(f"unknown top-level fields: {sorted(unknown)}")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version: unsupported value {version!r}")

    kw = {}
    ds = doc.get("dataset", {"synthetic": {}})
    if not isinstance(ds, dict):
        raise ConfigError("dataset: must be an object")
    if "synthetic" in ds:
        kw["synthetic"] = _section(SyntheticConfig.from_dict, "dataset.synthetic", ds["synthetic"])
    elif "train_path" in ds:
        kw["synthetic"] = None
        kw["train_path"] = ds["train_path"]
        kw["test_path"] = ds.get("test_path")
    else:
        raise ConfigError("dataset: need either 'synthetic' or 'train_path'")

    for name in ("k", "t", "master_seed", "exclude_native", "normalize"):
        if name in doc:
            kw[name] = doc[name]
    if "stage1_scorer" in doc:
        kw["stage1_scorer"] = _section(ScorerConfig.from_dict, "stage1_scorer", doc["stage1_scorer"])
    if doc.get("stage2_scorer") is not None:
        kw["stage2_scorer"] = _section(ScorerConfig.from_dict, "stage2_scorer", doc["stage2_scorer"])
    sweep = doc.get("sweep", {})
    if not isinstance(sweep, dict):
        raise ConfigError("sweep: must be an object")
    extra = set(sweep) - {"k_list", "alpha_list", "seed_list"}
    if extra:
        raise ConfigError(f"sweep: unknown fields {sorted(extra)}")
    for name in ("k_list", "alpha_list", "seed_list"):
        if name in sweep:
            if not isinstance(sweep[name], list):
                raise ConfigError(f"sweep.{name}: must be a list")
            kw[name] = tuple(float(a) for a in sweep[name]) if name == "alpha_list" else tuple(sweep[name])
    kw["output_dir"] = base_dir / doc.get("output_dir", "out")
    kw["pure_path"] = doc.get("pure_path")
    kw["base_dir"] = base_dir
    return RunConfig(**kw)


def load_config(path) -> RunConfig:
    path = Path(path)
    doc = read_json(path)
    try:
        return config_from_dict(doc, base_dir=path.parent)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
