"""Config schema, TOML loading, overrides, and hashing."""

import pytest

from hydrolink.config import (
    ConfigError,
    apply_overrides,
    config_hash,
    default_config,
    defaulted_fields,
    load_config,
    validate_tree,
)


class TestDefaults:
    def test_every_block_present(self):
        cfg = default_config()
        for block in ("environment", "grid", "link", "chain", "cs", "dfe", "detector"):
            assert block in cfg
        assert cfg["seed"] == 0
        assert cfg["chain"]["rx_power_w"] == 2.0
        assert cfg["chain"]["snr_db"] == 10.0
        assert cfg["environment"]["spreading_k"] == 1.5

    def test_none_path_loads_defaults(self):
        assert load_config(None) == default_config()


class TestValidation:
    def test_unknown_block_rejected(self):
        with pytest.raises(ConfigError, match="oceanography"):
            validate_tree({"oceanography": {"depth": 3}})

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="chain.warp_speed"):
            validate_tree({"chain": {"warp_speed": 9}})

    def test_type_error_names_field(self):
        with pytest.raises(ConfigError, match="chain.n_max"):
            validate_tree({"chain": {"n_max": "many"}})

    def test_bool_is_not_a_number(self):
        with pytest.raises(ConfigError, match="seed"):
            validate_tree({"seed": True})

    def test_range_check_names_field(self):
        with pytest.raises(ConfigError, match="environment.shipping_s"):
            validate_tree({"environment": {"shipping_s": 1.5}})

    def test_block_must_be_table(self):
        with pytest.raises(ConfigError, match="expected a table"):
            validate_tree({"chain": 7})

    @pytest.mark.parametrize(
        "tree,field",
        [
            ({"grid": {"f_min_khz": 10.0, "f_max_khz": 1.0}}, "grid.f_max_khz"),
            ({"grid": {"step_khz": 150.0}}, "grid.step_khz"),
            ({"cs": {"n": 16, "s_taps": 3}}, "cs.s_taps"),
            ({"cs": {"m_list": [4, 999]}}, "cs.m_list"),
            ({"cs": {"scheme": "wavelet"}}, "cs.scheme"),
        ],
    )
    def test_cross_checks(self, tree, field):
        with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
            validate_tree(tree)


class TestLoading:
    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(str(tmp_path / "absent.toml"))

    def test_parse_error_carries_location(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("[chain\nn_max = 3\n")
        with pytest.raises(ConfigError, match="broken.toml"):
            load_config(str(path))

    def test_empty_file_lists_blocks(self, tmp_path):
        path = tmp_path / "empty.toml"
        path.write_text("")
        with pytest.raises(ConfigError, match="chain"):
            load_config(str(path))

    def test_partial_file_merges_over_defaults(self, tmp_path):
        path = tmp_path / "partial.toml"
        path.write_text("[chain]\nn_max = 20\n")
        cfg = load_config(str(path))
        assert cfg["chain"]["n_max"] == 20
        assert cfg["chain"]["rx_power_w"] == 2.0  # untouched default


class TestOverrides:
    def test_numeric_override_lands_in_hash(self):
        cfg = default_config()
        out = apply_overrides(cfg, ["chain.n_max=20"])
        assert out["chain"]["n_max"] == 20
        by_file = validate_tree({"chain": {"n_max": 20}})
        assert config_hash(out) == config_hash(by_file)
        assert config_hash(out) != config_hash(cfg)

    def test_list_and_string_values(self):
        cfg = default_config()
        out = apply_overrides(cfg, ["cs.m_list=[4, 8]", "cs.scheme=fourier"])
        assert out["cs"]["m_list"] == [4, 8]
        assert out["cs"]["scheme"] == "fourier"

    def test_top_level_override(self):
        out = apply_overrides(default_config(), ["seed=99"])
        assert out["seed"] == 99

    @pytest.mark.parametrize("bad", ["n_max", "chain.sub.deep=1", "chain.warp=1", "chain.n_max=no"])
    def test_malformed_overrides(self, bad):
        with pytest.raises(ConfigError):
            apply_overrides(default_config(), [bad])

    def test_original_config_untouched(self):
        cfg = default_config()
        apply_overrides(cfg, ["chain.n_max=20"])
        assert cfg["chain"]["n_max"] == 10


class TestHash:
    def test_out_dir_ignored(self):
        a = default_config()
        b = default_config()
        b["out_dir"] = "/somewhere/else"
        assert config_hash(a) == config_hash(b)

    def test_seed_matters(self):
        a = default_config()
        b = apply_overrides(a, ["seed=5"])
        assert config_hash(a) != config_hash(b)

    def test_stable_format(self):
        h = config_hash(default_config())
        assert len(h) == 16
        assert h == config_hash(default_config())


class TestDefaultedFields:
    def test_full_report_for_empty_tree(self):
        report = defaulted_fields({})
        assert any(line.startswith("seed") for line in report)
        assert any("chain.n_max" in line for line in report)

    def test_partial_tree(self):
        report = defaulted_fields({"chain": {"n_max": 3}})
        assert not any("chain.n_max" in line for line in report)
        assert any("chain.rx_power_w" in line for line in report)
