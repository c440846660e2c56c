import pytest

from fecam import CellConfig, DeviceParams, GlobalConfig, MatchLineParams


@pytest.fixture(scope="session")
def params():
    return DeviceParams()


@pytest.fixture(scope="session")
def cfg():
    return CellConfig()


@pytest.fixture(scope="session")
def mlp():
    return MatchLineParams()


@pytest.fixture(scope="session")
def config():
    return GlobalConfig()
