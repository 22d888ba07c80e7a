#include <doctest.h>

#include "hbell/catalog.hpp"
#include "hbell/error.hpp"
#include "hbell/state_io.hpp"
#include "test_util.hpp"

#include <cstdio>
#include <filesystem>

using namespace hbell;

TEST_CASE("state_json_roundtrip_is_exact") {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 20; ++k) {
        const auto v = testutil::random_state(rng, 1 + k);
        const auto f = state_from_json(state_to_json(v, "random"));
        CHECK(f.state == v);
        CHECK(f.provenance == "random");
    }
}

TEST_CASE("state_json_layout") {
    const auto text = state_to_json(tmss(0.6, 2), "tmss(0.6)");
    CHECK(text.find("\"cutoff\": 2") != std::string::npos);
    CHECK(text.find("\"normalized\": false") != std::string::npos);
    CHECK(text.find("0.80000000000000004") != std::string::npos);
    CHECK(text.find("\"provenance\": \"tmss(0.6)\"") != std::string::npos);
}

TEST_CASE("provenance_is_escaped") {
    const auto f = state_from_json(state_to_json(CoefficientVector(), "a \"quoted\" name"));
    CHECK(f.provenance == "a \"quoted\" name");
}

TEST_CASE("malformed_files_are_rejected") {
    CHECK_THROWS_AS(state_from_json("{"), Error);
    CHECK_THROWS_AS(state_from_json("{\"cutoff\": 0}"), Error);
    CHECK_THROWS_AS(state_from_json("{\"coefficients\": []}"), Error);
    CHECK_THROWS_AS(state_from_json("{\"coefficients\": [1, \"x\"]}"), Error);
    CHECK_THROWS_AS(state_from_json("{\"cutoff\": 3, \"coefficients\": [1, 0]}"), Error);
    CHECK_THROWS_AS(state_from_json("{\"coefficients\": [1, 1], \"normalized\": true}"), Error);
    CHECK_NOTHROW(state_from_json("{\"coefficients\": [1, 1], \"normalized\": false}"));
}

TEST_CASE("state_file_roundtrip_on_disk") {
    const auto path = (std::filesystem::temp_directory_path() / "hbell_state_io_test.json").string();
    const auto v = tmss(0.3, 10);
    write_state_file(path, v, "tmss(0.3)");
    const auto f = read_state_file(path);
    CHECK(f.state == v);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_state_file(path), Error);
}
