"""
Read and write JSON files (algebra and family specifications may contain
C/C++ style comments) and (un)picklable JSON data used for golden snapshots.

Note:
    Floats are written with their shortest round-trip representation unless
    ``full_precision`` is set, in which case they are written with 17
    significant digits, exactly as :func:`tlgeom.utils.float_to_str()` renders
    them. Either way every value parses back to the identical 64-bit float.
"""
import json
import math
import pathlib
import re
from typing import Any, Dict, List, Match, Optional, Union, cast

import jsonpickle

import tlgeom

T_PATH = Union[str, pathlib.Path]

_FLOAT_MARK = "\x00float:"
_FLOAT_MARK_PATTERN = re.compile(r'"\\u0000float:([^"]*)"')


def remove_comments(data_str: str) -> str:
    """Return given string with removed C/C++ style `comments`_.

    Args:
        data_str: string to remove comments from.

    Returns:
        Input string without C/C++ style comments.

    .. _comments:
        https://stackoverflow.com/a/241506
    """

    def replacer(match: Match) -> str:
        s = match.group(0)
        if s.startswith("/"):
            return " "  # note: a space and not an empty string
        else:
            return s

    pattern = re.compile(r'//.*?$|/\*.*?\*/|\'(?:\\.|[^\\\'])*\'|"(?:\\.|[^\\"])*"', re.DOTALL | re.MULTILINE)

    return re.sub(pattern, replacer, data_str)


def _check(file_path: T_PATH) -> pathlib.Path:
    file_path = pathlib.Path(file_path)
    if not file_path.is_file():
        raise FileNotFoundError(f"JSON file does not exist: {file_path}")

    return file_path


def loads(data_str: str) -> Any:
    """Parse JSON string with comments."""
    return json.loads(remove_comments(data_str))


def read(file_path: T_PATH) -> Dict[str, Any]:
    """Open the given JSON file, strip comments and return dictionary data.

    Args:
        file_path: path to a file that needs to be parsed.

    Raises:
        FileNotFoundError: file does not exist.
        json.JSONDecodeError: file content is not valid JSON.
    """
    file_path = _check(file_path)
    with open(file_path, "r", encoding="utf-8") as f:
        data = loads(f.read())

    return data


def _float_token(number: float) -> str:
    if math.isnan(number):
        return "NaN"
    if math.isinf(number):
        return "Infinity" if number > 0 else "-Infinity"

    return tlgeom.utils.float_to_str(number)


def _mark_floats(data: Any) -> Any:
    if isinstance(data, float):
        return _FLOAT_MARK + _float_token(data)
    if isinstance(data, dict):
        return {key: _mark_floats(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [_mark_floats(value) for value in data]

    return data


def dumps(data: Any, indent: Optional[int] = 2, sort_keys: bool = False, full_precision: bool = False) -> str:
    """Return deterministic JSON string of ``data`` (insertion key order by default).

    Args:
        data: serializable object.
        indent: see :func:`json.dumps()`.
        sort_keys: if True, data keys are sorted alphabetically.
        full_precision: if True, floats are written as JSON numbers with 17
            significant digits (same text as report csv cells).
    """
    if not full_precision:
        return json.dumps(data, indent=indent, sort_keys=sort_keys)

    data_str = json.dumps(_mark_floats(data), indent=indent, sort_keys=sort_keys)

    return _FLOAT_MARK_PATTERN.sub(lambda match: match.group(1), data_str)


def write(data: Any, file_path: T_PATH, indent: int = 2, sort_keys: bool = False):
    """Write given data to a file in a JSON format.

    Args:
        data: serializable object to store to a file in JSON format.
        file_path: destination file path.
        indent: number of spaces to use while building file line indentation.
        sort_keys: if True, data keys are sorted alphabetically, else
            left unchanged.
    """
    with open(file_path, "w", encoding="utf-8") as f:
        f.write(dumps(data, indent, sort_keys))
        f.write("\n")


def read_jsonpickle(file_path: T_PATH, classes: Optional[Union[object, List[object]]] = None) -> Any:
    """Read given file and return unpicklable data - python objects with
    `jsonpickle`_ module.

    Args:
        file_path: path to a file that needs to be read.
        classes: see `jsonpickle`_ `decode()` docstring. If un-picklable
            objects are from modules which are not globally available,
            use ``classes`` arg to specify them.

    .. _jsonpickle:
        https://pypi.org/project/jsonpickle/
    """
    file_path = _check(file_path)
    with open(file_path, "r", encoding="utf-8") as f:
        data_str = f.read()

    return jsonpickle.decode(data_str, classes=classes)


def write_jsonpickle(data: Any, file_path: T_PATH, indent: int = 2):
    """Write given data to a file in a JSON format with `jsonpickle`_ module,
    which adds data type info for unpickling with :func:`read_jsonpickle()`.

    .. _jsonpickle:
        https://pypi.org/project/jsonpickle/
    """
    data_str = cast(str, jsonpickle.encode(data, indent=indent))
    file_path = pathlib.Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as f:
        f.write(data_str)
