import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdual import (
    Checkpoint,
    Circuit,
    Diffuse,
    Hadamard,
    Measure,
    ParseError,
    PhaseShift,
    PhaseShiftSpec,
    builtin_circuit,
    parse_circuit,
    print_circuit,
)
from qdual.dsl import format_angle, parse_angle

CANONICAL = {
    "figure1": "qubits 2\nh all\ncpf 11\nh all\ncpf 00\nh all\nmeasure\n",
    "figure2": "qubits 2\nh all\ncpf 11\ncheckpoint merge\nh all\ncpf 00\nh all\nmeasure\n",
    "figure3": "qubits 1\nh 0\ncheckpoint stage3\nh 0\nmeasure\n",
}


@pytest.mark.parametrize("name", sorted(CANONICAL))
def test_builtin_canonical_text(name):
    assert print_circuit(builtin_circuit(name)) == CANONICAL[name]
    assert parse_circuit(CANONICAL[name]) == builtin_circuit(name)


def test_diffuse_form_of_figure2():
    c = parse_circuit("qubits 2\nh all\ncpf 11\ncheckpoint merge\ndiffuse\nmeasure\n")
    assert c.stages == (
        Hadamard(),
        PhaseShift(PhaseShiftSpec(3, math.pi)),
        Checkpoint("merge"),
        Diffuse(),
        Measure(),
    )


def test_comments_blank_lines_and_crlf():
    text = "# experiment\r\n\r\nqubits 2   # two photons\r\n  h all\r\ncps 10 pi/2\r\n"
    c = parse_circuit(text)
    assert c.qubits == 2
    assert c.stages == (Hadamard(), PhaseShift(PhaseShiftSpec(2, math.pi / 2)))


def test_init_statement():
    c = parse_circuit("qubits 2\ninit 10\nh 1\n")
    assert c.initial == 2
    assert parse_circuit(print_circuit(c)) == c


@pytest.mark.parametrize(
    "text, value",
    [
        ("pi", math.pi),
        ("-pi", -math.pi),
        ("pi/2", math.pi / 2),
        ("2pi", 2 * math.pi),
        ("2*pi", 2 * math.pi),
        ("3*pi/4", 3 * math.pi / 4),
        ("0.25", 0.25),
        ("-1e-3", -1e-3),
        (".5", 0.5),
    ],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == value


@pytest.mark.parametrize("text", ["pie", "pi/0", "*pi", "pi/", "nan", "inf", "1/2", "", "2**pi"])
def test_parse_angle_rejects(text):
    with pytest.raises(ValueError):
        parse_angle(text)


def test_format_angle():
    assert format_angle(math.pi) == "pi"
    assert format_angle(math.pi / 2) == "pi/2"
    assert format_angle(0.1) == "0.10000000000000001"


def test_cps_pi_prints_as_cpf():
    c = Circuit(2, (PhaseShift(PhaseShiftSpec(1, math.pi)),))
    assert print_circuit(c) == "qubits 2\ncpf 01\n"
    assert parse_circuit("qubits 2\ncps 01 pi\n") == c


@pytest.mark.parametrize(
    "text, line, column, token, fragment",
    [
        ("qubits 2\nh 5\n", 2, 3, "5", "qubit index 5 out of range"),
        ("qubits 2\ncpf 111\n", 2, 5, "111", "bitstring length 3 != qubit count 2"),
        ("h 0\n", 1, 1, "h", "expected header"),
        ("", 1, 1, "", "missing header"),
        ("# only a comment\n", 1, 1, "", "missing header"),
        ("qubits 2\nqubits 2\n", 2, 1, "qubits", "duplicate"),
        ("qubits 0\n", 1, 8, "0", "qubit count"),
        ("qubits two\n", 1, 8, "two", "qubit count"),
        ("qubits 2\nswap 0 1\n", 2, 1, "swap", "unknown keyword"),
        ("qubits 2\nmeasure\nh 0\n", 2, 1, "measure", "final statement"),
        ("qubits 2\ncps 11 half\n", 2, 8, "half", "malformed angle"),
        ("qubits 2\ncps 11\n", 2, 1, "cps", "expects"),
        ("qubits 2\nh 0 1\n", 2, 5, "1", "unexpected token"),
        ("qubits 2\ncpf 1a\n", 2, 5, "1a", "bitstring"),
        ("qubits 2\ncheckpoint a\ncheckpoint a\n", 3, 12, "a", "duplicate checkpoint"),
        ("qubits 2\ncheckpoint 9x\n", 2, 12, "9x", "invalid checkpoint label"),
        ("qubits 2\nh 0\ninit 01\n", 3, 1, "init", "directly follow"),
        ("qubits 2\nh x\n", 2, 3, "x", "qubit index or 'all'"),
        ("qubits 2\ndiffuse now\n", 2, 9, "now", "unexpected token"),
        ("qubits 99\n", 1, 8, "99", "qubit count"),
    ],
)
def test_parse_errors(text, line, column, token, fragment):
    with pytest.raises(ParseError) as info:
        parse_circuit(text)
    err = info.value
    assert (err.line, err.column, err.token) == (line, column, token)
    assert fragment in err.message
    if token:
        source_line = text.split("\n")[line - 1]
        assert source_line[column - 1 : column - 1 + len(token)] == token


def test_first_error_wins():
    with pytest.raises(ParseError) as info:
        parse_circuit("qubits 2\nh 7\ncpf 111\nbogus\n")
    assert info.value.line == 2


# -- property tests ------------------------------------------------------------

_ANGLES = st.one_of(
    st.floats(-20, 20, allow_nan=False, allow_infinity=False),
    st.sampled_from([math.pi, math.pi / 2, -math.pi, 2 * math.pi, 0.0]),
)


@st.composite
def circuits(draw):
    q = draw(st.integers(1, 4))
    stage = st.one_of(
        st.just(Hadamard()),
        st.builds(Hadamard, st.integers(0, q - 1)),
        st.builds(lambda m, t: PhaseShift(PhaseShiftSpec(m, t)), st.integers(0, 2**q - 1), _ANGLES),
        st.just(Diffuse()),
    )
    stages = draw(st.lists(stage, max_size=10))
    labels = draw(st.lists(st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,6}", fullmatch=True), max_size=3, unique=True))
    for label in labels:
        stages.insert(draw(st.integers(0, len(stages))), Checkpoint(label))
    if draw(st.booleans()):
        stages.append(Measure())
    return Circuit(q, tuple(stages), draw(st.integers(0, 2**q - 1)))


@settings(max_examples=300, deadline=None)
@given(circuits())
def test_round_trip(c):
    assert parse_circuit(print_circuit(c)) == c


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="qubits hallcpfsdiueom0123456789#\n\r/*.-_ ", max_size=80))
def test_parser_never_fails_uncontrolled(text):
    try:
        parse_circuit(text)
    except ParseError as err:
        assert err.line >= 1 and err.column >= 1
        lines = text.split("\n")
        if err.token:
            assert err.token in lines[err.line - 1]
