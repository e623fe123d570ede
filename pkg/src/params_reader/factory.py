import logging

from pathlib import Path

from pydantic import ValidationError

from src.exceptions import ConfigError
from src.graph_params.params import Params
from src.params_reader.abstractions import ParamsReader
from src.params_reader.file_params_reader import JsonParamsReader, TomlParamsReader
from src.params_reader.schema import ParamsSchema

logger = logging.getLogger(__name__)


class ParamsReaderFactory:
    @staticmethod
    def get_params_reader(fmt: str, file_path: Path) -> ParamsReader:
        if fmt == "json":
            return JsonParamsReader(file_path)
        elif fmt == "toml":
            return TomlParamsReader(file_path)
        else:
            raise NotImplementedError


def load_params(file_path: Path) -> Params:
    file_path = Path(file_path)
    fmt = file_path.suffix.lstrip(".").lower()
    try:
        reader = ParamsReaderFactory.get_params_reader(fmt, file_path)
    except NotImplementedError:
        raise ConfigError(f"{file_path}: unsupported params format {fmt!r}, expected json or toml")
    if not file_path.exists():
        raise ConfigError(f"{file_path}: no such params file")
    raw = reader.read_raw()
    try:
        schema = ParamsSchema.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"{file_path}: {e}") from e
    params = schema.to_params()
    logger.info(f"Loaded params {params.digest()} from {file_path}")
    return params
