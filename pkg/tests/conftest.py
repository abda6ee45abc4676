import pytest

from wheelsieve.wheel import WheelMasks


@pytest.fixture(scope="session")
def small_masks():
    return WheelMasks.build(4000)
