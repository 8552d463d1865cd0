#include "snsrec/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace snsrec::rep {

void save_checkpoint(const ModelParams& params, const std::string& blob_path,
                     const std::string& manifest_path) {
  nlohmann::json manifest;
  manifest["version"] = 1;
  manifest["dims"] = {{"d", params.dims.d},
                      {"heads", params.dims.heads},
                      {"n_queries", params.dims.n_queries},
                      {"vocab", params.dims.vocab},
                      {"max_pos", params.dims.max_pos}};
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& s : params.store.specs())
    tensors.push_back({{"name", s.name},
                       {"rows", s.rows},
                       {"cols", s.cols},
                       {"offset", s.offset}});
  manifest["tensors"] = tensors;

  std::ofstream mout(manifest_path);
  if (!mout) throw IoError("cannot write " + manifest_path);
  mout << manifest.dump(2) << '\n';

  std::ofstream bout(blob_path, std::ios::binary);
  if (!bout) throw IoError("cannot write " + blob_path);
  const auto& flat = params.store.flat();
  bout.write(reinterpret_cast<const char*>(flat.data()),
             static_cast<std::streamsize>(flat.size() * 8));
}

ModelParams load_checkpoint(const std::string& blob_path,
                            const std::string& manifest_path) {
  std::ifstream min(manifest_path);
  if (!min) throw IoError("cannot read " + manifest_path);
  nlohmann::json manifest = nlohmann::json::parse(min);

  ModelDims dims;
  dims.d = manifest["dims"]["d"];
  dims.heads = manifest["dims"]["heads"];
  dims.n_queries = manifest["dims"]["n_queries"];
  dims.vocab = manifest["dims"]["vocab"];
  dims.max_pos = manifest["dims"]["max_pos"];
  ModelParams params = ModelParams::init(dims, 0);

  // shape agreement between manifest and the store layout
  const auto& specs = params.store.specs();
  const auto& tensors = manifest["tensors"];
  if (tensors.size() != specs.size())
    throw MalformedError("manifest tensor count mismatch");
  for (size_t i = 0; i < specs.size(); ++i) {
    if (tensors[i]["name"] != specs[i].name ||
        tensors[i]["rows"] != specs[i].rows ||
        tensors[i]["cols"] != specs[i].cols)
      throw MalformedError("manifest tensor layout mismatch at " +
                           specs[i].name);
  }

  std::ifstream bin(blob_path, std::ios::binary);
  if (!bin) throw IoError("cannot read " + blob_path);
  auto& flat = params.store.flat();
  bin.read(reinterpret_cast<char*>(flat.data()),
           static_cast<std::streamsize>(flat.size() * 8));
  if (!bin || bin.peek() != EOF)
    throw MalformedError("checkpoint blob size mismatch");
  return params;
}

}  // namespace snsrec::rep
