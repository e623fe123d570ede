import json

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from typing import Any, Dict
from pathlib import Path

from src.params_reader.abstractions import ParamsReader
from src.consts import EXAMPLE_PARAMS_JSON
from src.exceptions import ConfigError


class JsonParamsReader(ParamsReader):
    def __init__(self, file_path: Path = EXAMPLE_PARAMS_JSON):
        self.file_path = Path(file_path)

    def read_raw(self) -> Dict[str, Any]:
        try:
            with open(self.file_path) as json_file:
                return json.load(json_file)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{self.file_path}: malformed JSON ({e})") from e


class TomlParamsReader(ParamsReader):
    def __init__(self, file_path: Path):
        self.file_path = Path(file_path)

    def read_raw(self) -> Dict[str, Any]:
        try:
            with open(self.file_path, "rb") as toml_file:
                return tomllib.load(toml_file)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"{self.file_path}: malformed TOML ({e})") from e


if __name__ == "__main__":
    reader = JsonParamsReader()
    print(reader.read_raw())
