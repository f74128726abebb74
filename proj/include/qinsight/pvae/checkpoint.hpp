// Copyright 2026 The qinsight Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qinsight/pvae/model.hpp"

namespace qinsight::pvae {

// A model plus the question ids its columns correspond to.
struct Checkpoint {
  PVae model;
  std::vector<std::string> question_ids;
};

// Versioned text container. Values are written as hex floats, so a
// save/load round trip reproduces every parameter bit for bit.
void save_checkpoint(std::ostream& out, const PVae& model, const std::vector<std::string>& question_ids);
void save_checkpoint(const std::filesystem::path& path, const PVae& model, const std::vector<std::string>& question_ids);
Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace qinsight::pvae
