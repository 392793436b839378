__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import json
import os
import shutil

import pandas as pd
import pytest

import hytrans.utils as utils


def test_write_read_files(tmp_path):
    print("Testing utils.write_file...")

    tmpfile = str(tmp_path / "written_file.txt")
    assert not os.path.exists(tmpfile)
    utils.write_file(tmpfile, "hello!")
    assert os.path.exists(tmpfile)

    print("Testing utils.read_file...")

    content = utils.read_file(tmpfile)
    assert content == "hello!"


def test_write_bad_json(tmp_path):
    bad_json = {"Wakkawakkawakka'}": [{True}, "2", 3]}
    tmpfile = str(tmp_path / "json_file.txt")
    assert not os.path.exists(tmpfile)
    with pytest.raises(TypeError):
        utils.write_json(bad_json, tmpfile)


def test_write_json(tmp_path):
    good_json = {"Wakkawakkawakka": [True, "2", 3]}
    tmpfile = str(tmp_path / "good_json_file.txt")

    assert not os.path.exists(tmpfile)
    utils.write_json(good_json, tmpfile)
    with open(tmpfile, "r") as f:
        content = json.loads(f.read())
    assert isinstance(content, dict)
    assert "Wakkawakkawakka" in content
    content = utils.read_json(tmpfile)
    assert "Wakkawakkawakka" in content


def test_get_tmpdir():
    print("Testing utils.get_tmpdir")

    tmpdir = utils.get_tmpdir()
    assert os.path.exists(tmpdir)
    assert os.path.basename(tmpdir).startswith("hytrans")
    shutil.rmtree(tmpdir)


def test_csv_header(tmp_path):
    tmpfile = str(tmp_path / "trace.csv")
    frame = pd.DataFrame({"k": [1, 2], "value": [0.1, 1 / 3]})
    utils.write_csv(frame, tmpfile, ["hytrans 0.1.0", "seed=3"])
    with open(tmpfile) as f:
        assert f.readline() == "# hytrans 0.1.0\n"
    header, table = utils.read_csv(tmpfile)
    assert header == ["hytrans 0.1.0", "seed=3"]
    assert table["value"].iloc[1] == pytest.approx(1 / 3, rel=1e-11)


def test_staged_output(tmp_path):
    outdir = str(tmp_path / "results")
    with utils.staged_output(outdir) as staging:
        utils.mkdir_p(os.path.join(staging, "transfer"))
        utils.write_file(os.path.join(staging, "transfer", "trace.csv"), "k\n")
        assert not os.path.exists(outdir)
    assert os.path.exists(os.path.join(outdir, "transfer", "trace.csv"))

    failed = str(tmp_path / "failed")
    with pytest.raises(RuntimeError):
        with utils.staged_output(failed) as staging:
            utils.write_file(os.path.join(staging, "trace.csv"), "k\n")
            raise RuntimeError("interrupted")
    assert not os.path.exists(failed)
    assert [p for p in os.listdir(tmp_path) if p.startswith(".hytrans")] == []


def test_config_hash():
    first = utils.config_hash({"seed": 0, "molecule": "hcn"})
    assert first == utils.config_hash({"molecule": "hcn", "seed": 0})
    assert first != utils.config_hash({"molecule": "hcn", "seed": 1})
    assert len(first) == 12
