#pragma once
// Standard example inputs shared by tests and the command-line examples:
// small cyclic/elementary-abelian groups, the stock quotient chains, a
// Z-action on three points, and the loop graphs.

#include "ample/coarse.hpp"
#include "ample/dr.hpp"
#include "ample/grp.hpp"
#include "ample/pact.hpp"

namespace ample::fixtures {

// Z/n with elements 0..n-1 under addition.
grp::GroupPtr cyclicGroup(int n);
// (Z/2)^m with elements as bit vectors 0..2^m-1 under xor.
grp::GroupPtr elementaryAbelian2(int m);

// Integers (free rank 1, generator "a") with levels Z/2^k for k = 0..depth.
grp::QuotientChain integersMod2kChain(int depth);
// Free group on a, b with levels (Z/2^k)^2 via abelianization, k = 0..depth.
grp::QuotientChain freeTwoAbelianizedChain(int depth);
// (Z/2)^depth base (bit-vector group) with levels (Z/2)^k keeping the low
// k bits, k = 0..depth.
grp::QuotientChain directSum2Chain(int depth);

// Z acting on {0,1,2}: the generator shifts x -> x+1 wherever that stays in
// range; the square is forced on the single point 0. Nine arrows total.
pact::PartialActionSpec shiftOnThreePoints();
// Same spec with the square's entries deleted, violating the product axiom.
pact::PartialActionSpec shiftOnThreePointsBroken();
// The bit-vector group (Z/2)^m acting trivially on {0..m} and a top point,
// where gamma is defined at n iff its support lies below n.
pact::PartialActionSpec directSum2TrivialAction(int m);

// One vertex with n loops.
dr::DirectedGraph loopGraph(int n);
// One vertex with two loops labelled "0" and "1".
dr::DirectedGraph binaryGraph();
// One vertex, one loop per color in a rank-2 graph, with the commuting square.
dr::KGraph oneSquareKGraph();

// Points 0..n-1 with one generating entourage pairing each point with its
// successor.
coarse::FiniteCoarseSpace chainSpace(int n);
// Window {0..N} with values a^(x-y) in the free abelian group on "a".
coarse::WindowCocycle zWindowCocycle(int N);
// Window {0..N} with values b^-x a^(x-y) b^y in the free group on a, b: the
// difference cocycle of n -> b^-n a^n, whose fibers are singletons.
coarse::WindowCocycle fWindowCocycle(int N);

}  // namespace ample::fixtures
