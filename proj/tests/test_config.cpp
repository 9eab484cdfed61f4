#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <string>

#include "jiomber/config.hpp"

using namespace jiomber;

TEST_CASE("format_double round-trips representative values") {
    for (double v : {0.1, 1e-5, 3.141592653589793, 0.998, 850.0, -2.0, 1.0 / 3.0}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    // Integral values print as plain integers.
    CHECK(format_double(850.0) == "850");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-3.0) == "-3");
}

TEST_CASE("noise variance from SNR") {
    CHECK(noise_variance_for_snr(0.0) == doctest::Approx(1.0));
    CHECK(noise_variance_for_snr(10.0) == doctest::Approx(0.1));
    CHECK(noise_variance_for_snr(15.0) == doctest::Approx(std::pow(10.0, -1.5)));
}

TEST_CASE("receiver grammar accepts every documented form") {
    CHECK(ReceiverSpec::parse("full-rank-lms").alg == ReceiverSpec::Alg::FullLms);
    CHECK(ReceiverSpec::parse("full-rank-mber").alg == ReceiverSpec::Alg::FullMber);
    CHECK(ReceiverSpec::parse("mwf-lms:8").rank == 8);
    CHECK(ReceiverSpec::parse("mwf-mber:4").alg == ReceiverSpec::Alg::MwfMber);
    CHECK(ReceiverSpec::parse("jio-lms:6").rank == 6);
    CHECK(ReceiverSpec::parse("eig:8").alg == ReceiverSpec::Alg::Eig);

    const auto fixed = ReceiverSpec::parse("jio-mber:8");
    CHECK(fixed.alg == ReceiverSpec::Alg::JioMber);
    CHECK(!fixed.auto_rank);
    CHECK(fixed.rank == 8);

    const auto autod = ReceiverSpec::parse("jio-mber:3-20");
    CHECK(autod.auto_rank);
    CHECK(autod.d_min == 3);
    CHECK(autod.d_max == 20);
}

TEST_CASE("receiver labels round-trip through the parser") {
    for (const char* text : {"full-rank-lms", "full-rank-mber", "mwf-lms:8", "mwf-mber:4",
                             "jio-lms:6", "eig:8", "jio-mber:8", "jio-mber:3-20"}) {
        const auto spec = ReceiverSpec::parse(text);
        CHECK(spec.label() == text);
        const auto again = ReceiverSpec::parse(spec.label());
        CHECK(again.label() == spec.label());
    }
}

TEST_CASE("receiver grammar rejects malformed specs") {
    CHECK_THROWS_AS((void)ReceiverSpec::parse("lms"), ConfigError);
    CHECK_THROWS_AS((void)ReceiverSpec::parse("mwf-mber"), ConfigError);      // rank required
    CHECK_THROWS_AS((void)ReceiverSpec::parse("full-rank-lms:4"), ConfigError);
    CHECK_THROWS_AS((void)ReceiverSpec::parse("jio-mber:0"), ConfigError);
    CHECK_THROWS_AS((void)ReceiverSpec::parse("jio-mber:5-3"), ConfigError);  // empty range
    CHECK_THROWS_AS((void)ReceiverSpec::parse("mwf-lms:3-8"), ConfigError);   // range is jio-mber only
    CHECK_THROWS_AS((void)ReceiverSpec::parse("jio-mber:x"), ConfigError);
}

TEST_CASE("presets serialize and parse back unchanged") {
    for (const auto& name : preset_names()) {
        const auto cfg = preset(name);
        const std::string text = serialize_config(cfg);
        const auto parsed = parse_config(text);
        CHECK(serialize_config(parsed) == text);
        CHECK_NOTHROW(validate_config(parsed));
    }
}

TEST_CASE("preset fields match their scenarios") {
    CHECK(preset("fig2").num_users == 7);
    CHECK(preset("fig2").training_symbols == 250);
    CHECK(preset("fig2").data_symbols == 1500);
    CHECK(preset("fig3").num_users == 17);
    CHECK(preset("fig4").sweep == SweepKind::Snr);
    CHECK(!preset("fig4").snr_grid.empty());
    CHECK(preset("fig5").sweep == SweepKind::Users);
    CHECK(preset("fading").sweep == SweepKind::Doppler);
    CHECK(preset("ci").num_antennas == 16);
    CHECK(preset("ci").num_users == 8);
    CHECK(preset("ci").runs == 30);
    CHECK_THROWS_AS((void)preset("fig9"), ConfigError);
}

TEST_CASE("unknown keys and bad values are named in diagnostics") {
    try {
        (void)parse_config("m = 16\nbogus_key = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
    try {
        (void)parse_config("m = sixteen\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("sixteen") != std::string::npos);
    }
}

TEST_CASE("config text allows comments and blank lines") {
    const auto cfg = parse_config("# experiment\n\nm = 24\nk = 5 # trailing comment\n");
    CHECK(cfg.num_antennas == 24);
    CHECK(cfg.num_users == 5);
}

TEST_CASE("overrides apply after construction") {
    auto cfg = preset("fig2");
    apply_override(cfg, "snr_db=7.5");
    CHECK(cfg.snr_db == 7.5);
    apply_override(cfg, "receivers=jio-mber:8");
    REQUIRE(cfg.receivers.size() == 1);
    CHECK(cfg.receivers[0].label() == "jio-mber:8");
    apply_override(cfg, "execution=serial");
    CHECK(!cfg.parallel);
    CHECK_THROWS_AS(apply_override(cfg, "no_such_key=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "snr_db"), ConfigError); // missing '='
}

TEST_CASE("validation rejects inconsistent experiments") {
    auto cfg = preset("ci");

    auto broken = cfg;
    broken.num_users = broken.num_antennas + 1;
    CHECK_THROWS_AS(validate_config(broken), ConfigError);

    broken = cfg;
    broken.receivers.clear();
    CHECK_THROWS_AS(validate_config(broken), ConfigError);

    broken = cfg;
    broken.receivers[0] = ReceiverSpec::parse("jio-mber:40"); // rank above M = 16
    CHECK_THROWS_AS(validate_config(broken), ConfigError);

    broken = cfg;
    broken.sweep = SweepKind::Snr;
    broken.snr_grid = {10.0, 5.0}; // not increasing
    CHECK_THROWS_AS(validate_config(broken), ConfigError);

    broken = cfg;
    broken.mu_w = 0.0;
    CHECK_THROWS_AS(validate_config(broken), ConfigError);

    broken = cfg;
    broken.cov_lambda = 1.5;
    CHECK_THROWS_AS(validate_config(broken), ConfigError);
}

TEST_CASE("only the active sweep grid is serialized") {
    const auto fig4 = serialize_config(preset("fig4"));
    CHECK(fig4.find("snr_grid") != std::string::npos);
    CHECK(fig4.find("users_grid") == std::string::npos);
    CHECK(fig4.find("doppler_grid") == std::string::npos);

    const auto fig2 = serialize_config(preset("fig2"));
    CHECK(fig2.find("sweep = symbols") != std::string::npos);
    CHECK(fig2.find("_grid") == std::string::npos);
}
