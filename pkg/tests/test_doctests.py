import doctest
import importlib

import pytest

MODULES = ["quad", "phi", "counterterm", "bound", "polaron", "kernels", "pathmc", "partitions", "cli"]


@pytest.mark.parametrize("name", MODULES)
def test_docstring_examples(name):
    module = importlib.import_module(f"nelson_lab.{name}")
    result = doctest.testmod(module, optionflags=doctest.ELLIPSIS)
    assert result.failed == 0
