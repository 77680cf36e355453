// Copyright 2026 The radar-anomaly Authors
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


#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "radar_anomaly/dataset_io.hpp"
#include "radar_anomaly/errors.hpp"
#include "radar_anomaly/grouping.hpp"
#include "radar_anomaly/pipeline.hpp"
#include "radar_anomaly/render.hpp"
#include "radar_anomaly/synthgen.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace radar {
namespace {

using Points = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Indices = py::array_t<std::size_t, py::array::c_style | py::array::forcecast>;

std::vector<grouping::Point2> to_points(const Points& xy) {
  if (xy.ndim() != 2 || xy.shape(1) != 2) throw ShapeError("expected an (n, 2) array of positions");
  std::vector<grouping::Point2> out(static_cast<std::size_t>(xy.shape(0)));
  auto v = xy.unchecked<2>();
  for (py::ssize_t i = 0; i < xy.shape(0); ++i) out[static_cast<std::size_t>(i)] = {v(i, 0), v(i, 1)};
  return out;
}

std::vector<std::size_t> to_indices(const Indices& idx) {
  if (idx.ndim() != 1) throw ShapeError("expected a 1-D array of indices");
  return {idx.data(), idx.data() + idx.size()};
}

py::tuple grouping_result(const grouping::GroupingResult& r) {
  py::array_t<std::size_t> indices({r.num_centroids(), r.max_samples});
  std::copy(r.indices.begin(), r.indices.end(), indices.mutable_data());
  py::array_t<std::size_t> candidates(r.candidates.size());
  std::copy(r.candidates.begin(), r.candidates.end(), candidates.mutable_data());
  return py::make_tuple(indices, candidates);
}

py::dict metrics_dict(const pipeline::SplitReport& s) {
  py::dict d;
  d["frames"] = s.frames;
  d["tp"] = s.confusion.tp;
  d["fp"] = s.confusion.fp;
  d["fn"] = s.confusion.fn;
  d["tn"] = s.confusion.tn;
  d["precision"] = s.metrics.precision;
  d["recall"] = s.metrics.recall;
  d["f1"] = s.metrics.f1;
  return d;
}

models::Variant variant_of(const std::string& name) {
  const auto v = models::parse_variant(name);
  if (!v) throw ValidationError("unknown variant '" + name + "'");
  return *v;
}

}  // namespace
}  // namespace radar

PYBIND11_MODULE(_core, m) {
  using namespace radar;
  m.doc() = "Anomaly segmentation of sparse 2D radar point clouds.";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", error.ptr());

  py::enum_<Label>(m, "Label")
      .value("Normal", Label::Normal)
      .value("Anomalous", Label::Anomalous);
  py::enum_<SensorId>(m, "SensorId")
      .value("Center", SensorId::Center)
      .value("Left", SensorId::Left)
      .value("Right", SensorId::Right);
  py::enum_<Scenario>(m, "Scenario")
      .value("Normal", Scenario::Normal)
      .value("IntersectionLike", Scenario::IntersectionLike);

  py::class_<EgoState>(m, "EgoState")
      .def(py::init<>())
      .def_readwrite("speed", &EgoState::speed)
      .def_readwrite("yaw_rate", &EgoState::yaw_rate);

  py::class_<RadarTarget>(m, "RadarTarget")
      .def(py::init<>())
      .def_readwrite("x", &RadarTarget::x)
      .def_readwrite("y", &RadarTarget::y)
      .def_readwrite("v_d", &RadarTarget::v_d)
      .def_readwrite("v_d_comp", &RadarTarget::v_d_comp)
      .def_readwrite("rcs", &RadarTarget::rcs)
      .def_readwrite("label", &RadarTarget::label)
      .def_property_readonly("range", &RadarTarget::range)
      .def_property_readonly("azimuth", &RadarTarget::azimuth)
      .def("__eq__", [](const RadarTarget& a, const RadarTarget& b) { return a == b; });

  py::class_<RadarFrame>(m, "RadarFrame")
      .def(py::init<>())
      .def_readwrite("frame_id", &RadarFrame::frame_id)
      .def_readwrite("sensor", &RadarFrame::sensor)
      .def_readwrite("ego", &RadarFrame::ego)
      .def_readwrite("scenario", &RadarFrame::scenario)
      .def_readwrite("targets", &RadarFrame::targets)
      .def("positions", [](const RadarFrame& f) {
        py::array_t<double> xy({f.targets.size(), std::size_t{2}});
        auto v = xy.mutable_unchecked<2>();
        for (std::size_t i = 0; i < f.targets.size(); ++i) {
          v(i, 0) = f.targets[i].x;
          v(i, 1) = f.targets[i].y;
        }
        return xy;
      })
      .def("__eq__", [](const RadarFrame& a, const RadarFrame& b) { return a == b; });

  m.def("read_dataset", py::overload_cast<const std::filesystem::path&>(&read_dataset), py::arg("path"));
  m.def("write_dataset",
        [](const std::vector<RadarFrame>& frames, const std::filesystem::path& path) {
          write_dataset(frames, path);
        },
        py::arg("frames"), py::arg("path"));

  m.def("_generate",
        [](const std::string& scene_json) {
          const auto config = synthgen::scene_config_from_json(json::parse(scene_json));
          auto seq = synthgen::generate_sequence(config);
          return py::make_tuple(std::move(seq.frames), std::move(seq.warnings));
        },
        py::arg("scene_json"));
  m.def("_default_scene_json", [] { return synthgen::to_json(synthgen::SceneConfig{}).dump(); });
  m.def("dataset_stats", [](const std::vector<RadarFrame>& frames) {
    const auto s = synthgen::compute_stats(frames);
    py::dict d;
    d["frames"] = s.frames;
    d["targets"] = s.targets;
    d["anomalies"] = s.anomalies;
    d["frames_with_anomaly"] = s.frames_with_anomaly;
    d["intersection_frames"] = s.intersection_frames;
    d["anomaly_fraction"] = s.anomaly_fraction();
    d["anomalous_frame_fraction"] = s.anomalous_frame_fraction();
    return d;
  });

  m.def("ball_query",
        [](const Points& xy, const Indices& centroids, double radius, std::size_t k) {
          return grouping_result(grouping::ball_query(to_points(xy), to_indices(centroids), radius, k));
        },
        py::arg("positions"), py::arg("centroids"), py::arg("radius"), py::arg("max_samples"),
        "(indices[centroids, max_samples], candidates[centroids]) for a circular neighborhood.");
  m.def("ring_query",
        [](const Points& xy, const Indices& centroids, double width, std::size_t k) {
          return grouping_result(grouping::ring_query(to_points(xy), to_indices(centroids), width, k));
        },
        py::arg("positions"), py::arg("centroids"), py::arg("width"), py::arg("max_samples"),
        "(indices[centroids, max_samples], candidates[centroids]) for an origin-centered ring.");
  m.def("farthest_point_sample",
        [](const Points& xy, std::size_t count) {
          const auto idx = grouping::farthest_point_sample(to_points(xy), count);
          return py::array_t<std::size_t>(idx.size(), idx.data());
        },
        py::arg("positions"), py::arg("count"));
  m.def("knn",
        [](const Points& queries, const Points& reference, std::size_t k) {
          const auto q = to_points(queries);
          const auto idx = grouping::knn(q, to_points(reference), k);
          py::array_t<std::size_t> out({q.size(), k});
          std::copy(idx.begin(), idx.end(), out.mutable_data());
          return out;
        },
        py::arg("queries"), py::arg("reference"), py::arg("k"));

  py::class_<pipeline::ModelCheckpoint>(m, "Checkpoint")
      .def_static("load", &pipeline::load_checkpoint, py::arg("directory"))
      .def_readonly("seed", &pipeline::ModelCheckpoint::seed)
      .def_property_readonly("variant",
                             [](const pipeline::ModelCheckpoint& c) {
                               return std::string(models::to_string(c.model.config().variant));
                             })
      .def_property_readonly("config_json",
                             [](const pipeline::ModelCheckpoint& c) {
                               return models::to_json(c.model.config()).dump();
                             })
      .def("save",
           [](const pipeline::ModelCheckpoint& c, const std::filesystem::path& dir) {
             pipeline::save_checkpoint(dir, c.model, c.stats, c.seed);
           },
           py::arg("directory"))
      .def("predict",
           [](const pipeline::ModelCheckpoint& c, const RadarFrame& frame) {
             return pipeline::predict_frame(c.model, c.stats, frame);
           },
           py::arg("frame"))
      .def("evaluate",
           [](const pipeline::ModelCheckpoint& c, const std::vector<RadarFrame>& frames) {
             const auto report = pipeline::evaluate(c.model, c.stats, frames);
             py::dict out;
             for (const auto& s : report.splits) out[py::str(s.name)] = metrics_dict(s);
             return out;
           },
           py::arg("frames"), "Metrics per split: all, center, left, right, intersection, no_intersection.");

  m.def("_train",
        [](const std::vector<RadarFrame>& frames, const std::string& variant, const std::string& preset,
           const std::string& model_json, const std::string& train_json) {
          const models::Variant v = variant_of(variant);
          const bool desk = preset == "desk";
          if (!desk && preset != "default") throw ValidationError("preset must be 'default' or 'desk'");
          json mj = json::parse(model_json);
          mj["variant"] = variant;
          const auto mc = models::model_config_from_json(
              mj, desk ? models::ModelConfig::desk(v) : models::ModelConfig::defaults(v));
          const auto tc = pipeline::train_config_from_json(
              json::parse(train_json), desk ? pipeline::TrainConfig::desk() : pipeline::TrainConfig{});
          const auto split = pipeline::split_dataset(frames, tc.train_fraction);
          if (split.train.empty()) throw ValidationError("no Center frames to train on");
          std::optional<pipeline::TrainResult> r;
          {
            py::gil_scoped_release release;
            r.emplace(pipeline::train(mc, tc, split.train));
          }
          py::list log;
          for (const auto& e : r->log) log.append(py::make_tuple(e.epoch, e.lr, e.loss));
          return py::make_tuple(
              pipeline::ModelCheckpoint{std::move(r->model), std::move(r->stats), tc.seed}, log);
        },
        py::arg("frames"), py::arg("variant"), py::arg("preset"), py::arg("model_json"),
        py::arg("train_json"));
  m.def("split_dataset",
        [](const std::vector<RadarFrame>& frames, double train_fraction) {
          auto s = pipeline::split_dataset(frames, train_fraction);
          return py::make_tuple(std::move(s.train), std::move(s.test));
        },
        py::arg("frames"), py::arg("train_fraction") = 0.8);

  m.def("render_svg",
        [](const RadarFrame& frame, const std::optional<std::vector<Label>>& predicted,
           std::uint64_t seed) {
          render::SvgOptions options;
          options.seed = seed;
          return render::frame_svg(frame, predicted ? *predicted : std::vector<Label>{}, options);
        },
        py::arg("frame"), py::arg("predicted") = py::none(), py::arg("seed") = 0);
}
