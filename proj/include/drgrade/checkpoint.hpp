#pragma once

#include <string>
#include <vector>

#include "drgrade/tensor.hpp"

namespace drg {

// Flat binary container of named parameter tensors.
// Layout (little-endian):
//   magic "DRCK" | u32 version | u32 meta_len | meta bytes (UTF-8 key=value
//   lines) | u32 record count | records
// record: u32 name_len | name | 4 x u32 shape (n,c,h,w) | f64 values
struct Checkpoint {
    std::string metadata;
    struct Record {
        std::string name;
        Shape shape;
        std::vector<double> values;
    };
    std::vector<Record> records;

    const Record* find(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const std::string& metadata,
                     const std::vector<Parameter>& params);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace drg
