__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import errno
import hashlib
import json
import os
import shutil
import tempfile
from contextlib import contextmanager
from typing import Iterable, List, Optional, Tuple

import pandas as pd


def mkdir_p(path: str):
    """
    Make a directory path if it does not exist, akin to mkdir -p

    :param path : the path to create
    :type path: str
    """
    try:
        os.makedirs(path)
    except OSError as e:
        if e.errno == errno.EEXIST and os.path.isdir(path):
            pass
        else:
            raise ValueError(f"Error creating path {path}.")


def get_tmpdir(
    tmpdir: Optional[str] = None, prefix: Optional[str] = "", create: bool = True
) -> str:
    """
    Get a temporary directory for an operation.

    :param tmpdir: an optional parent for the temporary directory
    :type tmpdir: str
    :param prefix: an optional prefix for the temporary path
    :type prefix: str
    :param create: create the directory
    :type create: bool
    """
    tmpdir = tmpdir or tempfile.gettempdir()
    prefix = prefix or "hytrans-tmp"
    if create:
        mkdir_p(tmpdir)
        return tempfile.mkdtemp(prefix=prefix + ".", dir=tmpdir)
    return os.path.join(tmpdir, "%s.%s" % (prefix, os.getpid()))


@contextmanager
def staged_output(outdir: str):
    """
    Stage files in a sibling temporary directory, moving them into outdir
    only when the block finishes without an exception.

    with staged_output(outdir) as staging:
        write_file(os.path.join(staging, "trace.csv"), ...)
    """
    parent = os.path.dirname(os.path.abspath(outdir))
    staging = get_tmpdir(parent, prefix=".hytrans-staging")
    try:
        yield staging
        mkdir_p(outdir)
        for root, _, files in os.walk(staging):
            relative = os.path.relpath(root, staging)
            dest_root = os.path.normpath(os.path.join(outdir, relative))
            mkdir_p(dest_root)
            for filename in files:
                shutil.move(
                    os.path.join(root, filename), os.path.join(dest_root, filename)
                )
    finally:
        shutil.rmtree(staging, ignore_errors=True)


def config_hash(obj: dict, length: int = 12) -> str:
    """
    Hash a configuration dictionary in its canonical (sorted key) form.

    :param obj: the configuration to hash
    :type obj: dict
    :param length: number of hex digits to keep
    :type length: int
    """
    canonical = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha1(canonical.encode("utf-8")).hexdigest()[:length]


def write_file(filename: str, content: str, mode: str = "w") -> str:
    """
    Write content to a filename

    :param filename: filname to write
    :type filename: str
    :param content: content to write
    :type content: str
    :param mode: mode to write
    :type mode: str
    """
    with open(filename, mode) as filey:
        filey.writelines(content)
    return filename


def read_file(filename: str, mode: str = "r") -> str:
    with open(filename, mode) as filey:
        content = filey.read()
    return content


def print_json(json_obj: dict) -> str:
    """
    Pretty print json.

    :param json_obj: json object to print
    :type json_obj: dict
    """
    return json.dumps(json_obj, indent=4, separators=(",", ": "))


def write_json(json_obj: dict, filename: str, mode: str = "w") -> str:
    """
    Write json to a filename

    :param json_obj: json object to write
    :type json_obj: dict
    :param filename: filename to write
    :type filename: str
    :param mode: mode to write
    :type mode: str
    """
    with open(filename, mode) as filey:
        filey.writelines(print_json(json_obj))
    return filename


def read_json(filename: str, mode: str = "r") -> dict:
    """
    Read a json file to a dictionary.

    :param filename: filename to read
    :type filename: str
    """
    return json.loads(read_file(filename, mode))


def write_csv(frame: pd.DataFrame, filename: str, header: Iterable[str] = ()) -> str:
    """
    Write a data frame as CSV, preceded by '#'-prefixed metadata lines.

    Floats are written with a fixed format so equal inputs give equal bytes.

    :param frame: the table to write
    :type frame: pandas.DataFrame
    :param filename: filename to write
    :type filename: str
    :param header: metadata lines (without the leading '#')
    :type header: iterable of str
    """
    with open(filename, "w", newline="") as filey:
        for line in header:
            filey.write(f"# {line}\n")
        frame.to_csv(filey, index=False, float_format="%.12g", lineterminator="\n")
    return filename


def read_csv(filename: str) -> Tuple[List[str], pd.DataFrame]:
    """
    Read a CSV written by write_csv, returning (metadata lines, table).

    :param filename: filename to read
    :type filename: str
    """
    header = []
    with open(filename) as filey:
        for line in filey:
            if not line.startswith("#"):
                break
            header.append(line[1:].strip())
    return header, pd.read_csv(filename, comment="#")
