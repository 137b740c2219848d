import sys
from fractions import Fraction
from pathlib import Path

import pytest

from densicohom.parser.config_parser import ConfigParser, ScanSpec, EmptyConfigError, \
    MissingValueError, InvalidValueError


@pytest.fixture
def scan_config_path():
    return Path("test/auxilary_testing_files/scan_config.yaml")


@pytest.fixture
def two_slot_config_path():
    return Path("test/auxilary_testing_files/scan_config_two_slots.yaml")


def test_python_version():
    assert sys.version_info.major == 3


def test_include_and_defaults(scan_config_path):
    spec = ConfigParser(scan_config_path).scan_spec()
    assert spec == ScanSpec(n=1, k=2, lambda_grid=((0, Fraction(-1, 2), -1),),
                            output_format='csv', output_path=None, log_level='warning', jobs=1)


def test_output_path_relative_to_config(two_slot_config_path):
    spec = ConfigParser(two_slot_config_path).scan_spec()
    expected = two_slot_config_path.absolute().parent / 'output' / 'scan.jsonl'
    assert spec.output_path == expected
    assert spec.output_format == 'json'
    assert spec.log_level == 'info'
    assert spec.jobs == 2


def test_points_slot_one_outermost(two_slot_config_path):
    spec = ConfigParser(two_slot_config_path).scan_spec()
    half = Fraction(1, 2)
    assert spec.points == [(0, 0), (0, half), (half, 0), (half, half)]


def test_empty_config():
    with pytest.raises(EmptyConfigError):
        ConfigParser(Path("test/auxilary_testing_files/scan_config_empty.yaml"))


def test_missing_file():
    with pytest.raises(MissingValueError):
        ConfigParser(Path("test/auxilary_testing_files/not_there.yaml"))


def test_grid_slot_count_mismatch():
    with pytest.raises(InvalidValueError):
        ConfigParser(Path("test/auxilary_testing_files/scan_config_bad_grid.yaml"))


def test_schema_error_becomes_invalid_value(tmp_path):
    config = tmp_path / 'config.yaml'
    config.write_text("n: 1\nk: 2\nlambda_grid:\n  - [0.5]\n")
    with pytest.raises(InvalidValueError):
        ConfigParser(config)


@pytest.mark.parametrize('grid', [((0,),), ((0,), (1, 2))])
def test_scan_spec_checks_grid(grid):
    with pytest.raises(InvalidValueError):
        ScanSpec(n=3, k=1, lambda_grid=grid)


def test_scan_spec_empty_slot():
    with pytest.raises(MissingValueError):
        ScanSpec(n=2, k=1, lambda_grid=((0,), ()))
