#ifndef SNSREC_CHECKPOINT_HPP
#define SNSREC_CHECKPOINT_HPP

#include <string>

#include "snsrec/params.hpp"

namespace snsrec::rep {

// Little-endian f64 tensor blob plus a JSON manifest of names/shapes.
void save_checkpoint(const ModelParams& params, const std::string& blob_path,
                     const std::string& manifest_path);

ModelParams load_checkpoint(const std::string& blob_path,
                            const std::string& manifest_path);

}  // namespace snsrec::rep

#endif
