"""Numerical defaults and the dotenv-format configuration file loader."""

import dataclasses
from dataclasses import dataclass

from dotenv import dotenv_values

from pathlike.errors import ConfigError

PREFIX = "PATHLIKE_"


@dataclass(frozen=True)
class Settings:
    """
    Defaults shared by the CLI commands.

    Every field can be overridden from a config file (``PATHLIKE_<FIELD>=value``)
    and again from the matching command-line flag.
    """

    max_terms: int = 500
    rel_tol: float = 1e-15
    abs_tol: float = 1e-300
    mc_samples: int = 20000
    mc_chunk: int = 5000
    seed: int = 0xC0FFEE
    workers: int = 1
    max_half_length: int = 10
    quad_order: int = 12
    quad_tol: float = 1e-8

    def series_policy(self):
        """
        Build the series truncation policy.

        Returns:
            SeriesPolicy: Policy with this object's term budget and tolerances
        """
        from pathlike.special_fn import SeriesPolicy

        return SeriesPolicy(self.max_terms, self.rel_tol, self.abs_tol)

    def mc_config(self):
        """
        Build the Monte-Carlo configuration.

        Returns:
            McConfig: Sample count, seed, chunk size and worker count
        """
        from pathlike.oracle import McConfig

        return McConfig(
            samples=self.mc_samples,
            seed=self.seed,
            chunk=self.mc_chunk,
            workers=self.workers,
        )

    def override(self, **values):
        """Return a copy with every non-None value replaced."""
        changes = {k: v for k, v in values.items() if v is not None}
        return dataclasses.replace(self, **changes)


def _parse_value(field, raw):
    if field.type in (int, "int"):
        # Accept hex literals such as the default seed 0xC0FFEE
        return int(raw, 0)
    return float(raw)


def load_settings(path=None):
    """
    Load settings from a dotenv-format file.

    The process environment is neither read nor modified; only the named file
    is parsed.

    Args:
        path (str, optional): Path to the config file; None gives the defaults

    Returns:
        Settings: Defaults updated with the file's values

    Raises:
        ConfigError: If the file is missing, has unknown keys or bad values
    """
    if path is None:
        return Settings()

    try:
        with open(path, encoding="utf-8") as stream:
            raw_values = dotenv_values(stream=stream)
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}")

    fields = {f.name: f for f in dataclasses.fields(Settings)}
    values = {}
    for key, raw in raw_values.items():
        name = key[len(PREFIX):].lower() if key.startswith(PREFIX) else None
        if name not in fields:
            raise ConfigError(f"Unknown config key {key!r} in {path}")
        if raw is None:
            raise ConfigError(f"Config key {key!r} has no value")
        try:
            values[name] = _parse_value(fields[name], raw.strip())
        except ValueError:
            raise ConfigError(f"Config key {key!r} has malformed value {raw!r}")

    return Settings(**values)
