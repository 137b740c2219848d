import io
import json
import sys
from pathlib import Path

import pandas as pd
import pytest

from densicohom.command_line import main, parse_grid, EXIT_OK, EXIT_USAGE, \
    EXIT_VERIFICATION_FAILED, EXIT_ORACLE_MISMATCH, EXIT_NOT_STABILIZED
from densicohom.oracle import OracleResult
from densicohom.parser.file_generator import SCHEMA_VERSION, dumps_document


def test_python_version():
    assert sys.version_info.major == 3


@pytest.fixture
def scan_config_path():
    return Path("test/auxilary_testing_files/scan_config.yaml")


def run(argv):
    with pytest.raises(SystemExit) as exit_info:
        main(argv)
    return exit_info.value.code


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line]


def test_dim_wronskian(capsys):
    assert run(['dim', '--n', '2', '--lambda', '1/2,1/2', '--mu', '3']) == EXIT_OK
    out = capsys.readouterr().out
    document = json.loads(out)
    assert list(document)[0] == 'schema'
    assert document['schema'] == SCHEMA_VERSION
    assert document['dim_h1'] == 1
    assert document['dim_h1_relative'] == 0
    assert document['rank_lambda'] == 2
    assert document['case'] == {'tag': 'Integer', 'k': 2, 'resonant': False, 'r': None}
    assert document['params'] == {'n': 2, 'lambda': ['1/2', '1/2'], 'mu': '3', 'delta': '2'}
    assert document['bounds_satisfied']


def test_dim_output_is_canonical(capsys):
    run(['dim', '--n', '1', '--lambda=-1/2', '--delta', '2'])
    out = capsys.readouterr().out
    document = json.loads(out)
    assert dumps_document({key: value for key, value in document.items() if key != 'schema'}) \
        == out
    assert document['dim_h1'] == 2


def test_dim_non_integer_shift(capsys):
    assert run(['dim', '--n', '1', '--lambda', '1/4', '--mu', '3/4']) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document['case'] == {'tag': 'NonIntegerShift'}
    assert document['dim_h1'] == 0


def test_dim_csv(capsys):
    assert run(['dim', '--n', '2', '--lambda', '0,0', '--mu', '2', '--format', 'csv']) == EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame['case']) == ['resonant']
    assert list(frame['dim_h1']) == [1]


def test_dim_to_file(tmp_path):
    out = tmp_path / 'nested' / 'dim.json'
    assert run(['dim', '--n', '1', '--lambda', '0', '--mu', '1', '--out', str(out)]) == EXIT_OK
    assert json.loads(out.read_text())['dim_h1'] == 2


@pytest.mark.parametrize('argv',
                         [
                             ['dim', '--n', '2', '--lambda', '0', '--mu', '1'],
                             ['dim', '--n', '1', '--lambda', '0.5', '--mu', '1'],
                             ['dim', '--n', '1', '--lambda', '0', '--mu', '1', '--delta', '1'],
                             ['dim', '--n', '1', '--lambda', '0'],
                             ['dim', '--n', '0', '--lambda', '', '--mu', '1'],
                             ['scan', '--n', '1', '--k', '2'],
                             ['scan', '--n', '1', '--k', '-1', '--grid', '0'],
                             ['scan', '--n', '2', '--k', '1', '--grid', '0,1'],
                             ['matrix', '--n', '1', '--lambda', '0', '--k', '-1'],
                             ['oracle', '--n', '1', '--lambda', '0', '--mu', '1',
                              '--max-degree=-1'],
                         ])
def test_usage_errors(argv, capsys):
    assert run(argv) == EXIT_USAGE
    assert 'usage' in capsys.readouterr().err


def test_basis_wronskian(capsys):
    assert run(['basis', '--n', '2', '--lambda', '1/2,1/2', '--mu', '3']) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document['case']['k'] == 2
    assert len(document['basis']) == 1
    element = document['basis'][0]
    assert element['type'] == 'B'
    assert element['B'] == [{'alpha': [2, 0], 'coef': '1'}, {'alpha': [1, 1], 'coef': '-4'},
                            {'alpha': [0, 2], 'coef': '1'}]
    assert element['C'] == []
    assert element['annotation'] == "h' f'' g - 4 h' f' g' + h' f g''"


def test_basis_zero_shift_is_named(capsys):
    assert run(['basis', '--n', '1', '--lambda', '1/3', '--delta', '0']) == EXIT_OK
    basis = json.loads(capsys.readouterr().out)['basis']
    assert [element['name'] for element in basis] == ['C0']


def test_basis_empty_for_non_integer_shift(capsys):
    assert run(['basis', '--n', '1', '--lambda', '1/4', '--mu', '3/4']) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['basis'] == []


def test_basis_csv(capsys):
    assert run(['basis', '--n', '1', '--lambda=-1/2', '--delta', '2', '--format', 'csv']) == EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ['index', 'type', 'annotation']
    assert len(frame) == 2


@pytest.mark.parametrize('argv',
                         [
                             ['--n', '2', '--lambda', '1/2,1/2', '--mu', '3'],
                             ['--n', '1', '--lambda', '0', '--mu', '1'],
                             ['--n', '2', '--lambda', '1,1', '--mu', '2'],
                             ['--n', '1', '--lambda=-1/2', '--delta', '2'],
                         ])
def test_verify_passes(argv, capsys):
    assert run(['verify'] + argv) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document['passed']
    assert not document['perturbed']
    assert all(element['closed'] and element['nontrivial'] for element in document['elements'])


def test_verify_perturbed_fails(capsys):
    code = run(['verify', '--n', '2', '--lambda', '1/2,1/2', '--mu', '3', '--perturb'])
    assert code == EXIT_VERIFICATION_FAILED
    document = json.loads(capsys.readouterr().out)
    assert document['perturbed']
    assert not document['passed']
    assert not document['elements'][0]['closed']


def test_oracle_agrees(capsys):
    assert run(['oracle', '--n', '1', '--lambda', '0', '--mu', '1']) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document['engine_dim'] == 2
    assert document['oracle_dim'] == 2
    assert document['match']
    assert document['oracle']['stabilized']


def test_oracle_box_flags(capsys):
    argv = ['oracle', '--n', '1', '--lambda', '1/4', '--mu', '3/4', '--max-order', '1',
            '--max-degree', '2', '--margin', '1', '--format', 'csv']
    assert run(argv) == EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame['oracle_dim']) == [0]


def test_oracle_mismatch(mocker, capsys):
    mocker.patch('densicohom.oracle.stabilized_h1',
                 return_value=OracleResult(dim=7, stabilized=True, steps=2))
    assert run(['oracle', '--n', '1', '--lambda', '0', '--mu', '1']) == EXIT_ORACLE_MISMATCH
    document = json.loads(capsys.readouterr().out)
    assert not document['match']


def test_oracle_not_stabilized(mocker, capsys):
    mocker.patch('densicohom.oracle.stabilized_h1',
                 return_value=OracleResult(dim=None, stabilized=False, steps=5, last_dim=3))
    assert run(['oracle', '--n', '1', '--lambda', '0', '--mu', '1']) == EXIT_NOT_STABILIZED
    document = json.loads(capsys.readouterr().out)
    assert document['oracle_dim'] is None
    assert not document['stabilized']


def test_parse_grid():
    assert parse_grid("0,-1/2;1") == ((0, -0.5), (1,))


def test_scan_single_slot(capsys):
    assert run(['scan', '--n', '1', '--k', '2', '--grid=0,-1/2,-1']) == EXIT_OK
    rows = json_lines(capsys.readouterr().out)
    assert [row['schema'] for row in rows] == [SCHEMA_VERSION] * 3
    assert [row['lambda'] for row in rows] == [['0'], ['-1/2'], ['-1']]
    assert [row['dim_h1'] for row in rows] == [0, 2, 0]
    assert [row['case'] for row in rows] == ['resonant', 'resonant', 'generic']


def test_scan_two_slots_csv(capsys):
    argv = ['scan', '--n', '2', '--k', '1', '--grid', '0,1/2;0,1/2', '--format', 'csv']
    assert run(argv) == EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame['lambda']) == ['0,0', '0,1/2', '1/2,0', '1/2,1/2']
    assert all(frame['bounds_satisfied'])
    # the resonant corner has rank 0 at level 1
    assert list(frame['dim_h1']) == [3, 1, 1, 1]


def test_scan_parallel_keeps_order(capsys):
    argv = ['scan', '--n', '1', '--k', '2', '--grid=0,-1/2,-1']
    assert run(argv) == EXIT_OK
    sequential = capsys.readouterr().out
    assert run(argv + ['--jobs', '2', '--progress']) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out == sequential


def test_scan_config(scan_config_path, tmp_path, capsys):
    out = tmp_path / 'scan.csv'
    assert run(['scan', '--config', str(scan_config_path), '--out', str(out)]) == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame['dim_h1']) == [0, 2, 0]
    assert capsys.readouterr().out == ""


def test_scan_missing_config(capsys):
    assert run(['scan', '--config', 'test/auxilary_testing_files/missing.yaml']) == EXIT_USAGE
    assert 'does not exist' in capsys.readouterr().err


def test_matrix(capsys):
    assert run(['matrix', '--n', '2', '--lambda', '0,0', '--k', '2']) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document['rows'] == [[1, 0], [0, 1]]
    assert document['cols'] == [[2, 0], [1, 1], [0, 2]]
    assert document['entries'] == [['2', '0', '0'], ['0', '0', '2']]
    assert 'note' not in document


def test_matrix_level_zero(capsys):
    assert run(['matrix', '--n', '2', '--lambda', '0,0', '--k', '0']) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document['rows'] == []
    assert document['cols'] == [[0, 0]]
    assert 'note' in document


def test_matrix_csv(capsys):
    assert run(['matrix', '--n', '1', '--lambda=-1/2', '--k', '2', '--format', 'csv']) == EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ['row', '(2)']
    assert list(frame['(2)']) == [0]
