import importlib
import os

PACKAGE = "lafs"


def _module_names(package: str):
    for path, _, files in os.walk(package):
        for file_ in sorted(files):
            if not file_.endswith(".py") or file_ == "__main__.py":
                continue
            module = os.path.join(path, file_[: -len(".py")]).replace(os.sep, ".")
            if module.endswith(".__init__"):
                module = module[: -len(".__init__")]
            yield module


def test_circular_imports():
    for module_name in _module_names(PACKAGE):
        importlib.import_module(module_name)
