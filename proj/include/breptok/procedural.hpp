#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "breptok/model.hpp"

namespace breptok {

enum class SolidKind { box, n_prism, cylinder_approx, l_bracket };

const char* kind_name(SolidKind kind);
SolidKind kind_from_name(const std::string& name);

struct ProcParams {
    // box proportions
    double sx = 1.0, sy = 1.0, sz = 1.0;
    // n_prism / cylinder_approx
    int sides = 6;
    double radius = 1.0;
    double height = 1.0;
    // l_bracket: outer arms and arm thicknesses of the L cross-section
    double arm_a = 1.0, arm_b = 1.0;
    double thick_a = 0.45, thick_b = 0.45;
    // target half-extent after normalization; must stay < 1
    double extent = 0.9;
    // relative jitter applied to the dimension knobs (0 = exact shape)
    double jitter = 0.0;
};

// Known closed-form counts for a generated solid (genus 0).
struct GroundTruth {
    int vertices = 0;
    int edges = 0;
    int faces = 0;
};

struct Procedural {
    SolidModel solid;
    GroundTruth truth;
};

// Exact UV grids sampled from closed-form surfaces. The seed only drives the
// optional dimension jitter; the surfaces themselves are deterministic.
Procedural generate_procedural(SolidKind kind, const ProcParams& params, uint64_t seed = 0);

struct KindMix {
    std::vector<std::pair<SolidKind, double>> weights;
};

KindMix parse_kind_mix(const std::string& text);  // "box:0.4,n_prism:0.4,l_bracket:0.2"

struct CorpusSpec {
    KindMix mix;
    int count = 100;
    uint64_t seed = 0;
    double jitter = 0.15;
    int n_classes = 0;  // >0 assigns class_label = kind ordinal % n_classes
};

std::vector<Procedural> generate_corpus(const CorpusSpec& spec);

}  // namespace breptok
