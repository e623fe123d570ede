import os

from pathlib import Path

from src.consts import DEFAULT_RESULTS_DIR
from src.result_store.abstractions import IResultStore
from src.result_store.file_result_store import FileResultStore
from src.result_store.redis_result_store import RedisResultStore


class ResultStoreFactory:
    @staticmethod
    def get_result_store(store: str) -> IResultStore:
        if store == "file":
            return FileResultStore(Path(os.environ.get("DOUBLING_GRAPH_RESULTS_DIR", DEFAULT_RESULTS_DIR)))
        elif store == "redis":
            return RedisResultStore(url=os.environ["REDIS_URL"])
        else:
            raise NotImplementedError


def default_result_store() -> IResultStore:
    return ResultStoreFactory.get_result_store(os.environ.get("DOUBLING_GRAPH_STORE", "file"))
