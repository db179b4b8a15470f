import pytest

from sunitkit import parse_field, real_quadratic_field


@pytest.fixture(scope="session")
def q_i():
    return parse_field({"poly": [1, 0]})


@pytest.fixture(scope="session")
def q_sqrt2():
    return real_quadratic_field(2)


@pytest.fixture(scope="session")
def q_sqrt3():
    return real_quadratic_field(3)


@pytest.fixture(scope="session")
def q_sqrt5():
    # half-integer basis over x^2 - 5, index 2
    return parse_field(
        {"poly": [-5, 0], "integral_basis": [["1", "0"], ["1/2", "1/2"]]}
    )


@pytest.fixture(scope="session")
def q_sqrt_m5():
    return parse_field({"poly": [5, 0]})


@pytest.fixture(scope="session")
def cubic_2():
    return parse_field({"poly": [-2, 0, 0]})


@pytest.fixture(scope="session")
def quartic_t():
    return parse_field({"poly": [-1, -1, 0, 0]})


@pytest.fixture(scope="session")
def quadratic_fields(q_i, q_sqrt2, q_sqrt5, q_sqrt_m5):
    return {
        "q_i": q_i,
        "q_sqrt2": q_sqrt2,
        "q_sqrt5": q_sqrt5,
        "q_sqrt_m5": q_sqrt_m5,
    }
