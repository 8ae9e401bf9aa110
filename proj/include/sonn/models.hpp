#pragma once

#include <cstdint>

#include "sonn/models/context.hpp"
#include "sonn/models/gng.hpp"
#include "sonn/models/params.hpp"
#include "sonn/models/sgng.hpp"
#include "sonn/models/som.hpp"

namespace sonn {

/// Runtime model selection with every parameter bundle.
struct ModelSpec {
    ModelKind kind = ModelKind::gng;
    GngParams gng;          // gng, mgng, gamma_gng and the growth part of sgng
    ContextParams context;  // mgng (depth ignored) and gamma_gng
    SomParams som;          // som, msom, gamma_som
    SgngParams sgng;        // portion matching; `sgng.growth` is replaced by `gng`

    const DistanceMetric& metric() const { return is_growing(kind) ? gng.metric : som.metric; }

    SgngParams sgng_params() const {
        SgngParams p = sgng;
        p.growth = gng;
        return p;
    }

    void validate() const {
        switch (kind) {
            case ModelKind::som:
                som.validate();
                if (som.depth != 0) throw ConfigError("som: depth must be 0");
                break;
            case ModelKind::msom: som.validate(); break;
            case ModelKind::gamma_som:
                som.validate();
                if (som.depth < 1) throw ConfigError("gamma_som: depth must be >= 1");
                break;
            case ModelKind::gng: gng.validate(); break;
            case ModelKind::mgng:
                gng.validate();
                context.validate();
                break;
            case ModelKind::gamma_gng:
                gng.validate();
                context.validate();
                if (context.depth < 1) throw ConfigError("gamma_gng: depth must be >= 1");
                break;
            case ModelKind::sgng: sgng_params().validate(); break;
        }
    }
};

template <class Observer = NoObserver>
Network train(const Dataset& data, const ModelSpec& spec, std::uint64_t seed, Observer&& observer = {}) {
    switch (spec.kind) {
        case ModelKind::som: return train_som(data, spec.som, seed, observer);
        case ModelKind::msom: return train_msom(data, spec.som, seed, observer);
        case ModelKind::gamma_som: return train_gamma_som(data, spec.som, seed, observer);
        case ModelKind::gng: return train_gng(data, spec.gng, seed, observer);
        case ModelKind::mgng: return train_mgng(data, spec.gng, spec.context, seed, observer);
        case ModelKind::gamma_gng: return train_gamma_gng(data, spec.gng, spec.context, seed, observer);
        case ModelKind::sgng: return train_sgng(data, spec.sgng_params(), seed, observer);
    }
    throw ConfigError("unknown model kind");
}

}  // namespace sonn
