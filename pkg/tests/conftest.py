import json
import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SCHEMA_DIR = os.path.join(ROOT, 'docs', 'schemas')

# Add repository root to path for the abstab package
sys.path.insert(0, ROOT)


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='run long enumerations (two-qubit Lambda DD)')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long-running enumeration, needs --runslow')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def validate():
    """validate(obj, 'report') checks obj against docs/schemas/report.schema.json."""
    jsonschema = pytest.importorskip('jsonschema')

    def check(obj, name):
        with open(os.path.join(SCHEMA_DIR, f'{name}.schema.json')) as f:
            jsonschema.validate(instance=obj, schema=json.load(f))

    return check
