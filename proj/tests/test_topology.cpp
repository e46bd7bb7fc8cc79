#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "heteng/random.hpp"
#include "heteng/topology.hpp"

using namespace heteng;

TEST_CASE("average_density matches the closed form") {
  // pi * 25^2 * 300 / 10000
  CHECK(average_density(25.0, 300, 10000.0) ==
        Catch::Approx(58.90486).margin(1e-5));
  CHECK(average_density(25.0, 300, 10000.0) ==
        Catch::Approx(58.904862254808624).epsilon(1e-12));
}

TEST_CASE("average_density scales linearly in count and quadratically in radius") {
  const double base = average_density(20.0, 100, 10000.0);
  CHECK(average_density(20.0, 200, 10000.0) == Catch::Approx(2.0 * base));
  CHECK(average_density(40.0, 100, 10000.0) == Catch::Approx(4.0 * base));
  CHECK(average_density(20.0, 0, 10000.0) == 0.0);
}

TEST_CASE("average_density rejects bad inputs") {
  CHECK_THROWS_AS(average_density(25.0, 300, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(average_density(25.0, 300, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(average_density(-1.0, 300, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(average_density(25.0, -1, 100.0), std::invalid_argument);
}

TEST_CASE("place_nodes fills the field deterministically") {
  FieldSpec field;
  const auto nodes = place_nodes(field, 200, PlacementPolicy::Uniform, 7, 25.0);
  REQUIRE(nodes.size() == 200);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    CHECK(nodes[i].id == static_cast<int>(i));
    CHECK(nodes[i].position.x >= 0.0);
    CHECK(nodes[i].position.x <= field.width);
    CHECK(nodes[i].position.y >= 0.0);
    CHECK(nodes[i].position.y <= field.height);
    CHECK(nodes[i].comm_radius == 25.0);
    CHECK(nodes[i].alive);
  }

  const auto again = place_nodes(field, 200, PlacementPolicy::Uniform, 7, 25.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    CHECK(nodes[i].position.x == again[i].position.x);
    CHECK(nodes[i].position.y == again[i].position.y);
  }

  const auto other = place_nodes(field, 200, PlacementPolicy::Uniform, 8, 25.0);
  bool any_differ = false;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].position.x != other[i].position.x) any_differ = true;
  CHECK(any_differ);
}

TEST_CASE("grid placement centers nodes in cells") {
  FieldSpec field;
  const auto nodes = place_nodes(field, 9, PlacementPolicy::Grid, 0, 25.0);
  REQUIRE(nodes.size() == 9);
  // 3x3 grid on 100x100: cell centers at 1/6, 3/6, 5/6 of the span.
  const std::set<double> expected = {100.0 / 6.0, 50.0, 500.0 / 6.0};
  for (const auto& n : nodes) {
    bool x_ok = false, y_ok = false;
    for (double e : expected) {
      if (std::abs(n.position.x - e) < 1e-9) x_ok = true;
      if (std::abs(n.position.y - e) < 1e-9) y_ok = true;
    }
    CHECK(x_ok);
    CHECK(y_ok);
  }
}

TEST_CASE("place_nodes rejects bad inputs") {
  FieldSpec field;
  CHECK_THROWS_AS(place_nodes(field, 0, PlacementPolicy::Uniform, 1, 25.0),
                  std::invalid_argument);
  FieldSpec bad;
  bad.width = -5.0;
  CHECK_THROWS_AS(place_nodes(bad, 10, PlacementPolicy::Uniform, 1, 25.0),
                  std::invalid_argument);
}

namespace {

Node make_node(int id, double x, double y, double energy, double radius = 25.0) {
  Node n;
  n.id = id;
  n.position = {x, y};
  n.initial_energy = energy;
  n.residual_energy = energy;
  n.comm_radius = radius;
  return n;
}

}  // namespace

TEST_CASE("neighbors_of computes mean and sample stddev") {
  std::vector<Node> nodes = {make_node(0, 50, 50, 3.0),
                             make_node(1, 55, 50, 2.0),
                             make_node(2, 45, 50, 4.0)};
  const auto hood = neighbors_of(nodes[0], nodes);
  CHECK(hood.stats.neighbor_count == 2);
  CHECK(hood.stats.degree == 2);
  CHECK(hood.stats.mean_energy == Catch::Approx(3.0));
  CHECK(hood.stats.sample_stddev == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("neighbors_of handles degenerate neighborhoods") {
  SECTION("single neighbor has zero stddev") {
    std::vector<Node> nodes = {make_node(0, 50, 50, 3.0),
                               make_node(1, 60, 50, 2.0)};
    const auto hood = neighbors_of(nodes[0], nodes);
    CHECK(hood.stats.neighbor_count == 1);
    CHECK(hood.stats.mean_energy == Catch::Approx(2.0));
    CHECK(hood.stats.sample_stddev == 0.0);
  }
  SECTION("isolated node") {
    std::vector<Node> nodes = {make_node(0, 50, 50, 3.0),
                               make_node(1, 90, 90, 2.0)};
    const auto hood = neighbors_of(nodes[0], nodes);
    CHECK(hood.stats.neighbor_count == 0);
    CHECK(hood.stats.mean_energy == 0.0);
    CHECK(hood.stats.sample_stddev == 0.0);
  }
}

TEST_CASE("neighbors_of uses a closed ball and skips self and dead nodes") {
  std::vector<Node> nodes = {make_node(0, 0, 0, 1.0),
                             make_node(1, 25, 0, 1.0),    // exactly at radius
                             make_node(2, 25.01, 0, 1.0),  // just outside
                             make_node(3, 10, 0, 1.0)};
  nodes[3].alive = false;
  nodes[3].residual_energy = 0.0;
  const auto hood = neighbors_of(nodes[0], nodes);
  REQUIRE(hood.neighbor_ids.size() == 1);
  CHECK(hood.neighbor_ids[0] == 1);
  CHECK(hood.stats.degree == 1);
}

TEST_CASE("neighbor relation is symmetric for a uniform radius") {
  FieldSpec field;
  auto nodes = place_nodes(field, 60, PlacementPolicy::Uniform, 11, 25.0);
  for (const auto& n : nodes) {
    const auto hood = neighbors_of(n, nodes);
    CHECK(hood.stats.neighbor_count ==
          static_cast<int>(hood.neighbor_ids.size()));
    for (int other : hood.neighbor_ids) {
      const auto back = neighbors_of(nodes[other], nodes);
      CHECK(std::find(back.neighbor_ids.begin(), back.neighbor_ids.end(),
                      n.id) != back.neighbor_ids.end());
    }
  }
}
