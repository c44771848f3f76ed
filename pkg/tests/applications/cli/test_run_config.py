import pytest

from cutbirth.applications.cli.run_config import RunConfig, load_config, parse_config
from cutbirth.core.errors import IoError, ParseError, ValidationError


def test_gaussian_solve_config():
    config = parse_config('{"potential":[0,0,0.5],"mode":"solve","T":1.0}')
    assert config.mode == "solve"
    assert config.potential == [0.0, 0.0, 0.5]
    assert config.T == 1.0
    assert config.model.degree == 2


def test_birth_demo_critical_config():
    config = parse_config(
        '{"potential":[0,0,3,-1.666666667,0.25], "mode":"critical","bracket":[0.05,5]}'
    )
    assert config.mode == "critical"
    assert config.bracket == [0.05, 5.0]


def test_critical_bracket_default_filled():
    config = parse_config('{"potential":"birth-demo","mode":"critical"}')
    assert config.bracket == [0.05, 5.0]
    assert config.potential == pytest.approx([0.0, 0.0, 3.0, -5.0 / 3.0, 0.25])


@pytest.mark.parametrize(
    "source",
    [
        '{"potential":[0,1],"mode":"solve","T":1}',
        '{"potential":[0,0,0.5],"mode":"solve","T":0}',
        '{"potential":[0,0,-0.5],"mode":"solve","T":1}',
        '{"potential":[0,0,0.5],"mode":"solve","T":1,"cuts":3}',
        '{"potential":[0,0,0.5],"mode":"sweep","trange":[0.5,1.5,1]}',
        '{"potential":[0,0,0.5],"mode":"dance","T":1}',
    ],
)
def test_invalid_values(source):
    with pytest.raises(ValidationError):
        parse_config(source)


def test_unknown_key_is_named():
    with pytest.raises(ParseError) as info:
        parse_config('{"potential":[0,0,0.5],"mode":"solve","T":1,"temperature":2}')
    assert info.value.key == "temperature"


def test_missing_mode_specific_key():
    with pytest.raises(ParseError) as info:
        parse_config('{"potential":[0,0,0.5],"mode":"gas","T":1}')
    assert info.value.key == "N"


def test_malformed_json_reports_line():
    with pytest.raises(ParseError) as info:
        parse_config('{"potential": [0, 0, 0.5],\n "mode": }')
    assert info.value.line == 2


@pytest.mark.parametrize(
    "source",
    [
        '{"potential":[0,0,0.5],"mode":"solve","T":1.0,"out":"solve.csv"}',
        '{"potential":"birth-demo","mode":"critical"}',
        '{"potential":"birth-demo","mode":"sweep","trange":[0.2,0.6,41],"window":0.05}',
        '{"potential":"birth-demo","mode":"gas","T":0.4,"N":200,"seed_occupancy":true,"tol":1e-8}',
    ],
)
def test_round_trip(source):
    config = parse_config(source)
    assert parse_config(config.to_json()) == config


def test_toml_document():
    config = parse_config('potential = "gaussian"\nmode = "solve"\nT = 2.0\ncuts = 1\n')
    assert config == RunConfig(potential=[0.0, 0.0, 0.5], mode="solve", T=2.0, cuts=1)


def test_malformed_toml():
    with pytest.raises(ParseError):
        parse_config('potential = [0, 0,\nmode = "solve"\n')


def test_flag_list():
    config = parse_config("sweep --potential birth-demo --trange 0.2,0.6,41 --window 0.1")
    assert config.mode == "sweep"
    assert config.trange == [0.2, 0.6, 41.0]
    assert config.window == 0.1
    gas = parse_config("gas --potential gaussian --temp=1 --n 10 --seed-occupancy")
    assert gas.seed_occupancy is True
    assert gas.N == 10


def test_unknown_flag():
    with pytest.raises(ParseError):
        parse_config("solve --potential gaussian --temp 1 --bogus 2")


def test_load_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"potential":"gaussian","mode":"solve","T":1}', encoding="utf-8")
    assert load_config(path).T == 1.0
    with pytest.raises(IoError):
        load_config(tmp_path / "missing.json")
