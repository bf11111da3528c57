// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <string>
#include <variant>

#include "woldkit/representation.hpp"
#include "woldkit/shifts.hpp"

namespace woldkit {

using Json = nlohmann::ordered_json;

// Complex entries are [re, im] pairs, row-major.
Json matrix_to_json(const Mat& A);
Mat matrix_from_json(const Json& j, Index rows, Index cols, const std::string& what);

Json to_json(const Representation& rep);
Json to_json(const UnilateralSpec& spec);
Json to_json(const BilateralSpec& spec);

Representation representation_from_json(const Json& j);
UnilateralSpec unilateral_from_json(const Json& j);
BilateralSpec bilateral_from_json(const Json& j);

using Instance = std::variant<Representation, UnilateralSpec, BilateralSpec>;

Json to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

// Syntax errors carry "line L, column C" in the message.
Json parse_json_text(const std::string& text);
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Two-space indent plus trailing newline.
std::string dump(const Json& j);

}  // namespace woldkit
