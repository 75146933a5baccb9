import csv
import json
import os

import pytest

from abstab import __version__, export
from abstab.cli import main, parse_spectrum
from abstab.errors import InputError
from abstab.operators import enumerate_stabilizer_states


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def read_csv(path):
    with open(path, newline='') as f:
        return list(csv.reader(f))


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(['--version'])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


# ── enumerate ──


def test_enumerate_stab(tmp_path, capsys, validate):
    code, out = run(capsys, '--outdir', str(tmp_path), 'enumerate', 'stab', '-d', '2', '-n', '2')
    assert code == 0
    doc = json.loads((tmp_path / 'stab-d2-n2.json').read_text())
    assert doc['count'] == len(doc['operators']) == 60
    assert '60 operators' in out
    validate(doc, 'operator')


def test_enumerate_qutrit_lambda(tmp_path, capsys):
    out = tmp_path / 'q.json'
    assert run(capsys, 'enumerate', 'lambda', '-d', '3', '-n', '1', '-o', str(out))[0] == 0
    doc = json.loads(out.read_text())
    assert doc['count'] == 81
    assert sum(op['label'] == 'phase-point' for op in doc['operators']) == 9


def test_enumerate_cnc_single_type(tmp_path, capsys):
    code, _ = run(capsys, '--outdir', str(tmp_path), 'enumerate', 'cnc', '-d', '2', '-n', '2', '-m', '2')
    assert code == 0
    assert json.loads((tmp_path / 'cnc-d2-n2.json').read_text())['count'] == 6 * 32


def test_outdir_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv('ABSTAB_OUTPUT_DIR', str(tmp_path / 'env'))
    assert run(capsys, 'enumerate', 'phasepoints', '-d', '3', '-n', '1')[0] == 0
    doc = json.loads((tmp_path / 'env' / 'phasepoints-d3-n1.json').read_text())
    assert doc['count'] == 9


@pytest.mark.parametrize('argv', [
    ['enumerate', 'lambda', '-d', '2', '-n', '2'],
    ['enumerate', 'lambda', '-d', '7', '-n', '1'],
    ['enumerate', 'phasepoints', '-d', '2', '-n', '1'],
    ['enumerate', 'cnc', '-d', '3', '-n', '2'],
    ['radii'],
])
def test_usage_errors(tmp_path, capsys, argv):
    assert run(capsys, '--outdir', str(tmp_path), *argv)[0] == 2
    assert not list(tmp_path.iterdir())


def test_bad_prime_exit_code(capsys):
    assert run(capsys, 'radii', '-d', '4', '-n', '1')[0] == 2


# ── test ──


def test_classify_boundary_spectrum(capsys, validate):
    code, out = run(capsys, 'test', '-d', '3', '-n', '1', '--spectrum', '0.5,0.5,0')
    assert code == 0
    doc = json.loads(out)
    assert doc['verdicts']['awp'] is True
    assert doc['verdicts']['astab'] is False
    assert doc['violated_constraints']
    validate(doc, 'report')


def test_classify_uniform(capsys):
    doc = json.loads(run(capsys, 'test', '-d', '2', '-n', '2', '--spectrum', 'uniform')[1])
    assert doc['verdicts']['astab'] is True
    assert doc['verdicts']['in_stab_hull_known'] is True


def test_classify_three_qubits_is_conditional(capsys):
    doc = json.loads(run(capsys, 'test', '-d', '2', '-n', '3', '--spectrum', '0.3,0.3,0.2,0.2,0,0,0,0')[1])
    assert doc['conditional'] is True


def test_classify_matrix(tmp_path, capsys):
    path = str(tmp_path / 'rho.json')
    export.write_json(path, enumerate_stabilizer_states(2, 1)[0].to_json())
    code, out = run(capsys, 'test', '-d', '2', '-n', '1', '--matrix', path)
    assert code == 0
    assert json.loads(out)['verdicts']['in_stab_hull_known'] is True


@pytest.mark.parametrize('spectrum', ['0.5,0.4', '0.5,0.6', '1.2,-0.2', 'a,b', 'nan,1'])
def test_bad_spectrum_exit_code(capsys, spectrum):
    assert run(capsys, 'test', '-d', '2', '-n', '1', '--spectrum', spectrum)[0] == 3


def test_matrix_with_wrong_dimensions(tmp_path, capsys):
    path = str(tmp_path / 'rho.json')
    export.write_json(path, enumerate_stabilizer_states(3, 1)[0].to_json())
    assert run(capsys, 'test', '-d', '2', '-n', '1', '--matrix', path)[0] == 3
    assert run(capsys, 'test', '-d', '2', '-n', '1', '--matrix', str(tmp_path / 'missing.json'))[0] == 3


def test_parse_spectrum_renormalizes():
    s = parse_spectrum('0.5000000001,0.5', 2, 1)
    assert s.trace == pytest.approx(1.0, abs=1e-15)
    assert list(parse_spectrum('uniform', 3, 1).values) == pytest.approx([1 / 3] * 3)
    with pytest.raises(InputError):
        parse_spectrum('0.5', 2, 1)


# ── spectral-polytope, radii ──


def test_awp_polytope_csv(tmp_path, capsys):
    out = tmp_path / 'awp.csv'
    code, _ = run(capsys, 'spectral-polytope', 'awp', '-d', '3', '-n', '1', '--format', 'csv', '-o', str(out))
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ['l1', 'l2', 'l3']
    assert sorted(rows[1:]) == [['0', '0.5', '0.5'], ['0.5', '0', '0.5'], ['0.5', '0.5', '0']]
    ternary = read_csv(tmp_path / 'awp-spectral-d3-n1-ternary.csv')
    assert ternary[0] == export.TERNARY_HEADER
    assert len(ternary) == 4


def test_polytope_json_is_reproducible(tmp_path, capsys, validate):
    a, b = tmp_path / 'a.json', tmp_path / 'b.json'
    for path in (a, b):
        assert run(capsys, 'spectral-polytope', 'awp', '-d', '5', '-n', '1', '-o', str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    validate(json.loads(a.read_text()), 'polytope')


def test_awp_bruteforce_flag(tmp_path, capsys):
    a, b = tmp_path / 'a.json', tmp_path / 'b.json'
    run(capsys, 'spectral-polytope', 'awp', '-d', '3', '-n', '2', '-o', str(a))
    run(capsys, 'spectral-polytope', 'awp', '-d', '3', '-n', '2', '--bruteforce', '-o', str(b))
    va = sorted(json.loads(a.read_text())['V'])
    vb = sorted(json.loads(b.read_text())['V'])
    assert va == vb


def test_radii_single(capsys, validate):
    code, out = run(capsys, 'radii', '-d', '3', '-n', '1')
    assert code == 0
    doc = json.loads(out)
    assert doc['radii']['r_stab']['squared'] == '1/24'
    assert doc['radii']['R_awp']['squared'] == '1/6'
    validate(doc, 'radii')


def test_radii_all(capsys, validate):
    code, out = run(capsys, 'radii', '--all')
    assert code == 0
    doc = json.loads(out)
    assert {(r['d'], r['n']) for r in doc} >= {(2, 5), (3, 3), (5, 2), (7, 2)}
    assert all(r['d'] ** r['n'] <= 49 for r in doc)
    assert [r['stab_inside_gb'] for r in doc if r['d'] == 2] == [True, True, False, False, False]
    validate(doc, 'radii')
    assert run(capsys, 'radii', '--all')[1] == out


def test_radii_csv(tmp_path, capsys):
    out = tmp_path / 'radii.csv'
    assert run(capsys, 'radii', '-d', '2', '-n', '1', '--format', 'csv', '-o', str(out))[0] == 0
    rows = read_csv(out)
    assert rows[0][:2] == ['d', 'n']
    assert rows[1][0:2] == ['2', '1'] and rows[1][3] == '' and rows[1][-1] == 'true'


# ── sample, conjectures ──


def test_sample_json(tmp_path, capsys, validate):
    code, _ = run(capsys, '--outdir', str(tmp_path), 'sample', '-n', '1', '--count', '3', '--seed', '4',
                  '--operators')
    assert code == 0
    doc = json.loads((tmp_path / 'samples-n1-seed4.json').read_text())
    assert doc['count'] == 3 and doc['distinct_fingerprints'] == 1
    assert all('operator' in s for s in doc['samples'])
    validate(doc, 'samples')


def test_sample_is_reproducible(tmp_path, capsys):
    paths = []
    for jobs in ('1', '2'):
        out = tmp_path / f'j{jobs}.csv'
        run(capsys, 'sample', '-n', '2', '--count', '4', '--seed', '11', '--jobs', jobs,
            '--format', 'csv', '-o', str(out))
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert read_csv(paths[0])[0] == ['draw', 'l1', 'l2', 'l3', 'l4', 'hs_norm2']


def test_conjectures_exhaustive(tmp_path, capsys, validate):
    code, out = run(capsys, '--outdir', str(tmp_path), 'conjectures', '-n', '2', '--exhaustive')
    assert code == 0
    assert sorted(os.listdir(tmp_path)) == ['hsnorm_hist.csv', 'lorenz.csv', 'summary.json']
    summary = json.loads((tmp_path / 'summary.json').read_text())
    assert summary['failures'] == []
    assert summary['orbits'] == 8
    validate(summary, 'summary')
    assert '0 failures' in out
    lorenz = read_csv(tmp_path / 'lorenz.csv')
    assert lorenz[0] == ['k', 'S(k)', 'label']
    assert len(lorenz) == 1 + 32
    assert all(float(s) == pytest.approx(1.0) for k, s, _ in lorenz[1:] if k == '4')


def test_conjectures_needs_a_mode(tmp_path, capsys):
    assert run(capsys, '--outdir', str(tmp_path), 'conjectures', '-n', '2')[0] == 2
    assert run(capsys, '--outdir', str(tmp_path), 'conjectures', '-n', '3', '--exhaustive')[0] == 2
