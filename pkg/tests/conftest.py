import numpy as np
import pytest

from walshlab import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile/cache jit kernels on tiny inputs so timed tests measure the
    # algorithms, not the first-call compilation
    v = np.zeros(8, dtype=np.int64)
    kernels.wht_inplace(v)
    b = np.zeros(8, dtype=np.uint8)
    kernels.mobius_inplace(b)
    kernels.exp_table(3, 0b1011, 2)
    kernels.masked_parity(v, 3)
