#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "usfda/dataset.hpp"
#include "usfda/error.hpp"
#include "usfda/fda.hpp"
#include "usfda/metrics.hpp"
#include "usfda/simulator.hpp"
#include "usfda/spectral.hpp"
#include "usfda/version.hpp"

namespace py = pybind11;
using namespace usfda;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

void require_2d(const py::buffer_info& info, const char* what) {
  if (info.ndim != 2) throw ShapeError(std::string(what) + " must be a 2-D array, got " + std::to_string(info.ndim) + "-D");
}

Image2D to_image(const RealArray& a, const char* what = "image") {
  const auto info = a.request();
  require_2d(info, what);
  const auto h = static_cast<std::size_t>(info.shape[0]), w = static_cast<std::size_t>(info.shape[1]);
  const auto* p = static_cast<const double*>(info.ptr);
  return Image2D(w, h, std::vector<double>(p, p + w * h));
}

RealArray to_array(const Image2D& img) {
  RealArray out({img.height(), img.width()});
  std::memcpy(out.mutable_data(), img.data().data(), img.size() * sizeof(double));
  return out;
}

ComplexArray to_array(const Spectrum2D& spec) {
  ComplexArray out({spec.height(), spec.width()});
  std::memcpy(out.mutable_data(), spec.data().data(), spec.size() * sizeof(Complex));
  return out;
}

Spectrum2D to_spectrum(const ComplexArray& a) {
  const auto info = a.request();
  require_2d(info, "spectrum");
  const auto h = static_cast<std::size_t>(info.shape[0]), w = static_cast<std::size_t>(info.shape[1]);
  const auto* p = static_cast<const Complex*>(info.ptr);
  return Spectrum2D(w, h, std::vector<Complex>(p, p + w * h));
}

metrics::BinaryMask to_mask(const py::array& a, const char* what) {
  const auto img = to_image(RealArray::ensure(a), what);
  std::vector<std::uint8_t> bits(img.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const double v = img.data()[i];
    if (v != 0.0 && v != 1.0) throw InvalidInputError(std::string(what) + " must contain only 0 and 1");
    bits[i] = v == 1.0;
  }
  return metrics::BinaryMask(img.width(), img.height(), std::move(bits));
}

py::dict to_dict(const dataset::Assignment& a) {
  py::dict d;
  for (const auto& [k, v] : a) d[py::str(k)] = v;
  return d;
}

}  // namespace

PYBIND11_MODULE(_usfda, m) {
  m.doc() = "Fourier domain adaptation and speckle simulation for ultrasound images.";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInputError>(m, "InvalidInputError", base);
  py::register_exception<ParameterError>(m, "ParameterError", base);
  py::register_exception<ShapeError>(m, "ShapeError", base);
  py::register_exception<SpectralInconsistencyError>(m, "SpectralInconsistencyError", base);
  py::register_exception<ConfigurationError>(m, "ConfigurationError", base);
  py::register_exception<IngestionError>(m, "IngestionError", base);
  py::register_exception<ManifestError>(m, "ManifestError", base);
  py::register_exception<IntegrityError>(m, "IntegrityError", base);
  py::register_exception<PairingError>(m, "PairingError", base);

  m.def("forward_dft", [](const RealArray& img) { return to_array(spectral::forward_dft(to_image(img))); },
        py::arg("image"), "Unnormalized 2-D DFT with DC at [0, 0].");
  m.def("inverse_dft", [](const ComplexArray& spec) { return to_array(spectral::inverse_dft(to_spectrum(spec))); },
        py::arg("spectrum"), "Inverse of forward_dft; the spectrum must be conjugate-symmetric.");
  m.def("log_magnitude",
        [](const RealArray& img) { return to_array(spectral::log_magnitude_image(spectral::forward_dft(to_image(img)))); },
        py::arg("image"), "Centered log(1+|F|), scaled to [0, 1].");

  m.def("build_mask",
        [](std::size_t width, std::size_t height, double alpha) {
          const auto mask = fda::build_mask(width, height, alpha);
          py::array_t<std::uint8_t> out({height, width});
          std::memcpy(out.mutable_data(), mask.data().data(), mask.data().size());
          return out;
        },
        py::arg("width"), py::arg("height"), py::arg("alpha") = fda::kDefaultAlpha,
        "Centered low-frequency mask as a uint8 array of shape (height, width).");

  m.def("adapt",
        [](const RealArray& source, const RealArray& target, double alpha, const std::string& range) {
          const fda::FdaParams params{alpha, fda::parse_range_policy(range)};
          return to_array(fda::adapt(to_image(source, "source"), to_image(target, "target"), params));
        },
        py::arg("source"), py::arg("target"), py::arg("alpha") = fda::kDefaultAlpha, py::arg("range") = "clip",
        "Source phase with the target's low-frequency magnitude; range is 'clip' or 'rescale'.");

  m.def("dice",
        [](const py::array& truth, const py::array& pred, double epsilon) {
          return metrics::dice(to_mask(truth, "truth"), to_mask(pred, "pred"), epsilon);
        },
        py::arg("truth"), py::arg("pred"), py::arg("epsilon") = metrics::kDefaultEpsilon);
  m.def("threshold",
        [](const RealArray& img, double t) {
          const auto mask = metrics::threshold(to_image(img), t);
          py::array_t<std::uint8_t> out({mask.height(), mask.width()});
          std::memcpy(out.mutable_data(), mask.data().data(), mask.data().size());
          return out;
        },
        py::arg("image"), py::arg("t") = 0.5);

  m.def("simulate",
        [](const RealArray& mask, std::uint64_t seed, std::size_t size, std::size_t n_scatterers, double width_mm,
           double depth_mm, const py::dict& psf) {
          simulator::PhantomSpec spec;
          spec.anechoic_mask = to_image(mask, "mask");
          spec.seed = seed;
          spec.n_scatterers = n_scatterers;
          spec.width_mm = width_mm;
          spec.depth_mm = depth_mm;
          simulator::PsfParams params;
          if (!psf.empty()) {
            const auto json_str = py::module_::import("json").attr("dumps")(psf).cast<std::string>();
            params = simulator::psf_from_json(nlohmann::json::parse(json_str));
          }
          simulator::SimulatedSample s;
          {
            py::gil_scoped_release release;
            s = simulator::simulate(spec, params, size);
          }
          py::dict out;
          out["bmode"] = to_array(s.bmode);
          out["envelope"] = to_array(s.envelope);
          out["ground_truth"] = to_array(s.ground_truth);
          return out;
        },
        py::arg("mask"), py::arg("seed") = 0, py::arg("size") = simulator::kDefaultOutputSize,
        py::arg("n_scatterers") = 100000, py::arg("width_mm") = 50.0, py::arg("depth_mm") = 50.0,
        py::arg("psf") = py::dict(),
        "Render one B-mode sample; mask pixels > 0.5 are anechoic. Returns bmode, envelope and ground_truth.");

  m.def("split",
        [](const std::vector<std::string>& ids, std::size_t train, std::size_t val, std::size_t test,
           std::uint64_t seed) {
          const auto r = dataset::split(ids, {train, val, test, seed});
          py::dict out;
          out["train"] = r.train;
          out["val"] = r.val;
          out["test"] = r.test;
          out["unassigned"] = r.unassigned;
          return out;
        },
        py::arg("ids"), py::arg("train"), py::arg("val"), py::arg("test"), py::arg("seed") = 0);

  m.def("make_pairing",
        [](const std::vector<std::string>& sources, const std::vector<std::string>& targets, const std::string& mode,
           std::uint64_t seed, std::uint64_t iteration) {
          return to_dict(dataset::make_pairing(sources, targets, dataset::parse_pairing_mode(mode), seed, iteration));
        },
        py::arg("sources"), py::arg("targets"), py::arg("mode") = "random", py::arg("seed") = 0,
        py::arg("iteration") = 0, "Source id -> target id; mode is 'random' or 'fixed'.");
}
