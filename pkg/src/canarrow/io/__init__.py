from .json_io import dumps_json, load_json, save_json
from .txt_io import load_txt

__all__ = [
    "dumps_json",
    "load_json",
    "save_json",
    "load_txt",
]
