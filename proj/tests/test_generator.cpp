#include <doctest.h>

#include <algorithm>
#include <random>

#include "evsp/generator.hpp"
#include "support.hpp"

using namespace evsp;

TEST_SUITE("generator") {
  TEST_CASE("uniform draws stay in range and cover it") {
    std::mt19937_64 rng(3);
    std::vector<int> hits(6, 0);
    for (int i = 0; i < 6000; ++i) {
      const auto x = gen::uniform(rng, 10, 15);
      REQUIRE(x >= 10);
      REQUIRE(x <= 15);
      ++hits[static_cast<std::size_t>(x - 10)];
    }
    for (const auto h : hits) CHECK(h > 800);
    CHECK(gen::uniform(rng, 4, 4) == 4);
    CHECK_THROWS_AS(gen::uniform(rng, 5, 4), gen::GeneratorError);
  }

  TEST_CASE("grid instance shape") {
    const auto inst = gen::generate_grid(30, 1);
    CHECK(inst.stations().size() >= 3);
    CHECK(inst.stations().size() <= 5);
    CHECK(inst.customers().size() == 30);
    for (const auto& s : inst.stations()) {
      CHECK(s.capacity >= 10);
      CHECK(s.capacity <= 20);
      CHECK(s.chargers == (s.capacity + 1) / 2);
    }
    for (const auto& c : inst.customers()) {
      CHECK(!c.demands.empty());
      CHECK(c.demands.size() <= 4);
    }
    for (const auto& v : inst.vehicles()) CHECK(v.initial_energy == inst.battery_capacity());
  }

  TEST_CASE("grid demand counts for 120 customers") {
    for (const std::uint64_t seed : {1u, 2u, 77u}) {
      const auto inst = gen::generate_grid(120, seed);
      CHECK(inst.customers().size() == 120);
      CHECK(inst.demands().size() >= 120);
      CHECK(inst.demands().size() <= 480);
    }
  }

  TEST_CASE("grid departures follow the commuting peaks") {
    const auto inst = gen::generate_grid(200, 4);
    for (const auto& c : inst.customers()) {
      const auto first = c.demands.front().depart;
      const bool morning = first >= Minutes(420) && first <= Minutes(540);
      const bool evening = first >= Minutes(960) && first <= Minutes(1140);
      CHECK((morning || evening));
    }
  }

  TEST_CASE("same arguments give identical files") {
    CHECK(dump_instance(gen::generate_grid(30, 11)) == dump_instance(gen::generate_grid(30, 11)));
    CHECK(dump_instance(gen::generate_grid(30, 11)) != dump_instance(gen::generate_grid(30, 12)));
    CHECK(dump_instance(gen::generate_vamo(2, 30, 7)) == dump_instance(gen::generate_vamo(2, 30, 7)));
    CHECK(dump_instance(gen::generate_small(5)) == dump_instance(gen::generate_small(5)));
  }

  TEST_CASE("generated files reload unchanged") {
    for (const auto& inst : {gen::generate_grid(40, 2), gen::generate_vamo(3, 40, 2), gen::generate_small(9)}) {
      const auto text = dump_instance(inst);
      CHECK(dump_instance(parse_instance(text)) == text);
    }
  }

  TEST_CASE("city scenario one") {
    const auto inst = gen::generate_vamo(1, 250, 7);
    REQUIRE(inst.stations().size() == 12);
    std::vector<int> caps;
    for (const auto& s : inst.stations()) {
      caps.push_back(s.capacity);
      CHECK(s.chargers == s.capacity);
    }
    std::sort(caps.begin(), caps.end());
    CHECK(caps == std::vector<int>{3, 3, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4});
    CHECK(inst.customers().size() == 250);
    for (const auto& c : inst.customers()) CHECK(c.demands.size() == 1);
  }

  TEST_CASE("city scenario two allows several demands") {
    const auto inst = gen::generate_vamo(2, 100, 7);
    std::size_t most = 0;
    for (const auto& c : inst.customers()) most = std::max(most, c.demands.size());
    CHECK(most > 1);
    CHECK(most <= 4);
  }

  TEST_CASE("city scenario four holds the whole fleet everywhere") {
    const auto inst = gen::generate_vamo(4, 30, 7);
    for (const auto& s : inst.stations()) CHECK(s.capacity == static_cast<int>(inst.vehicles().size()));
    const auto three = gen::generate_vamo(3, 30, 7);
    for (const auto& s : three.stations()) {
      CHECK(s.capacity >= 10);
      CHECK(s.capacity <= 20);
    }
  }

  TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(gen::generate_vamo(5, 30, 1), gen::GeneratorError);
    CHECK_THROWS_AS(gen::generate_vamo(0, 30, 1), gen::GeneratorError);
    CHECK_THROWS_AS(gen::generate_grid(0, 1), gen::GeneratorError);
  }

  TEST_CASE("small instances stay within the oracle caps") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      const auto inst = gen::generate_small(seed);
      CHECK(inst.customers().size() <= 6);
      CHECK(inst.vehicles().size() <= 2);
      CHECK(inst.stations().size() <= 3);
      CHECK(inst.demands().size() <= 12);
    }
  }

  TEST_CASE("a share of grid demands needs more than half a battery") {
    std::size_t over = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      const auto inst = gen::generate_grid(60, seed);
      for (const auto& d : inst.demands()) {
        ++total;
        over += d.energy > inst.battery_capacity() / 2;
        CHECK(d.energy <= inst.battery_capacity());
      }
    }
    const double share = static_cast<double>(over) / static_cast<double>(total);
    CHECK(share > 0.10);
    CHECK(share < 0.20);
  }
}
