import inspect

from . import state_tests
from . import models_tests
from . import principles_tests
from . import executor_tests
from . import phase_tests
from . import oracles_tests
from . import solver_tests
from . import harness_tests
from . import settings_tests
from . import cli_tests
from . import experiments_tests


def handle_test(module, test):
    print(test + "\t", end="")
    fn = getattr(module, test)
    if inspect.signature(fn).parameters:
        print("SKIPPED (needs pytest fixtures)")
        return
    try:
        fn()
        print("OK")
    except Exception as e:
        print("ERROR (%s)" % e)


def handle_module(module_name, module):
    print(module_name)
    for test in dir(module):
        if test.startswith("test_"):
            handle_test(module, test)


def run(slow=False):
    handle_module("state tests", state_tests)
    handle_module("models tests", models_tests)
    handle_module("principles tests", principles_tests)
    handle_module("executor tests", executor_tests)
    handle_module("phase tests", phase_tests)
    handle_module("oracles tests", oracles_tests)
    handle_module("solver tests", solver_tests)
    handle_module("harness tests", harness_tests)
    handle_module("settings tests", settings_tests)
    handle_module("cli tests", cli_tests)
    if slow:
        handle_module("experiments tests", experiments_tests)
