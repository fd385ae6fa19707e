#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "hlsdiff/ast.hpp"
#include "hlsdiff/input.hpp"
#include "hlsdiff/trace.hpp"

namespace hlsdiff {

// Everything the hardware run does differently, derived from directives.
struct HardwareConfig {
    std::map<std::string, TypeSpec> type_overrides;  // qualified var -> storage type
    std::map<std::string, int64_t> static_sizes;     // qualified var -> element bound
    std::map<std::string, int64_t> pipeline;         // "fn.label" -> latency L
    std::map<std::string, int64_t> unroll;           // "fn.label" -> factor F
    std::map<std::string, int64_t> dataflow;         // fn -> fifo depth D
    std::map<std::string, int64_t> stack_limit;      // fn -> max recursion depth
};

HardwareConfig derive_hw_config(const Program& p);

// Reduce v into the representable range of t: modulo 2^W, two's complement
// when signed. Idempotent.
int64_t wrap_to_width(int64_t v, const TypeSpec& t);

// Truncate v to W-I fraction bits (toward zero) and wrap the scaled value
// into W bits. dropped reports whether the result differs from v.
double quantize_fixed(double v, const TypeSpec& t, bool* dropped = nullptr);

enum class ExecMode { Software, Hardware };

struct ExecOptions {
    ExecMode mode = ExecMode::Software;
    HardwareConfig hw;
    int64_t step_budget = 1000000;
};

ExecTrace run_program(const Program& p, const TestInput& in, const ExecOptions& opt);

ExecTrace run_software(const Program& p, const TestInput& in,
                       int64_t budget = 1000000);
ExecTrace run_hardware(const Program& p, const HardwareConfig& cfg, const TestInput& in,
                       int64_t budget = 1000000);

}  // namespace hlsdiff
