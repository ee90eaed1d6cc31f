import pytest

from ipfpp import FixedWeights, build_region

# the worked 1-d configuration used across modules:
# weights w(0,1)=0.1, w(1,2)=0.2, w(-1,0)=0.3, w(-2,-1)=0.05 on the l1 ball
# of radius 2
WORKED_WEIGHTS = {
    ((0,), (1,)): 0.1,
    ((1,), (2,)): 0.2,
    ((-1,), (0,)): 0.3,
    ((-2,), (-1,)): 0.05,
}


@pytest.fixture
def worked_region():
    return build_region("l1", 1, R=2)


@pytest.fixture
def worked_cfg():
    return FixedWeights(WORKED_WEIGHTS)
