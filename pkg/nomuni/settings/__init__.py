import os
import typing
from pathlib import Path

import toml

from nomuni import CONFIG_DIR

settings_defaults = {
    # solver
    "solver/seed": 0,
    "solver/fresh_prefix": "Z",
    "solver/mint_atoms": True,

    # output
    "output/format": "text",
    "output/verify": True,

    # batch
    "batch/workers": 0,

    # error reporting, opt in
    "errorReporting/enabled": False,
    "errorReporting/dsn": "",

    "log/file": "",
}

env_overrides = {
    "NOMUNI_SEED": "solver/seed",
    "NOMUNI_SENTRY_DSN": "errorReporting/dsn",
}


def _flatten(table: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in table.items():
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{prefix}{key}/"))
        else:
            flat[f"{prefix}{key}"] = value
    return flat


def _nest(flat: dict) -> dict:
    table = {}
    for key, value in flat.items():
        *parents, leaf = key.split("/")
        node = table
        for parent in parents:
            node = node.setdefault(parent, {})
        node[leaf] = value
    return table


class NomuniSettings:
    def __init__(self, path: typing.Optional[Path] = None, environ: typing.Optional[typing.Mapping] = None):
        self.path = Path(path) if path is not None else self.default_path()
        self.environ = os.environ if environ is None else environ
        self._values = {}
        self.reload()

    @staticmethod
    def default_path() -> Path:
        return Path(os.environ.get("NOMUNI_CONFIG", CONFIG_DIR / "config.toml")).expanduser()

    def reload(self):
        self._values = {}
        if self.path.is_file():
            self._values.update(_flatten(toml.load(self.path)))

    def value(self, key: str, defaultValue: typing.Optional[typing.Any] = None) -> typing.Any:
        for env, env_key in env_overrides.items():
            if env_key == key and self.environ.get(env):
                return self.environ[env]
        default = settings_defaults.get(key) if defaultValue is None else defaultValue
        return self._values.get(key, default)

    def setValue(self, key: str, value: typing.Any) -> None:
        self._values[key] = value

    def save(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("w") as f:
            toml.dump(_nest(self._values), f)


settings = NomuniSettings()
