# This is needed for importing fixtures from `fixtures` directory
pytest_plugins = [
    "lafs.tests.fixtures.misc",
    "lafs.tests.fixtures.trees",
]
