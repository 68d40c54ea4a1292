import pytest


@pytest.fixture
def emit_line(request):
    """Write a line straight to the terminal, bypassing output capture."""
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def _emit(text):
        if reporter is not None:
            reporter.ensure_newline()
            reporter.write_line(text)
        else:
            print(text)
    return _emit
