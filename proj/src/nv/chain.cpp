// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Chain scenario. Each node runs one coroutine protocol. Entangled-pair
// bookkeeping is per qubit end: every elementary-link half gets a unique id,
// nodes keep {partner end, partner node, tracked Pauli} per held end, and a
// swap leaves tombstones so corrections that race with concurrent swaps are
// forwarded along the entanglement line (a Pauli acting on one half of a
// shared pair is equivalent to the same Pauli on the other half, so a
// forwarded correction stays valid).

#include "qnetsim/nv/chain.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <coroutine>
#include <cstdlib>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "qnetsim/proto/protocol.hpp"

namespace qnet::nv {

namespace {

using frame::P;
namespace api = quant::api;

// Minimal nested coroutine for structuring a protocol body; resumes the
// awaiting coroutine on completion and rethrows any stored exception.
struct Sub {
  struct promise_type {
    std::coroutine_handle<> cont;
    std::exception_ptr err;

    Sub get_return_object() {
      return Sub{std::coroutine_handle<promise_type>::from_promise(*this)};
    }
    std::suspend_always initial_suspend() noexcept { return {}; }
    struct Fin {
      bool await_ready() const noexcept { return false; }
      std::coroutine_handle<> await_suspend(
          std::coroutine_handle<promise_type> h) const noexcept {
        auto c = h.promise().cont;
        return c ? c : std::noop_coroutine();
      }
      void await_resume() const noexcept {}
    };
    Fin final_suspend() noexcept { return {}; }
    void return_void() {}
    void unhandled_exception() { err = std::current_exception(); }
  };

  explicit Sub(std::coroutine_handle<promise_type> hh) : h(hh) {}
  Sub(Sub&& o) noexcept : h(o.h) { o.h = nullptr; }
  Sub(const Sub&) = delete;
  ~Sub() {
    if (h) h.destroy();
  }

  bool await_ready() const { return false; }
  std::coroutine_handle<> await_suspend(std::coroutine_handle<> cont) {
    h.promise().cont = cont;
    return h;
  }
  void await_resume() const {
    if (h.promise().err) std::rethrow_exception(h.promise().err);
  }

  std::coroutine_handle<promise_type> h;
};

// Bell label of (Pa (x) Pb)|phi[1,-1]> modulo phase: X flips b, Z flips a,
// Y flips both, from either side.
std::pair<int, int> bell_label(P pa, P pb) {
  int a = 1, b = -1;
  for (P p : {pa, pb}) {
    if (p == P::X || p == P::Y) b = -b;
    if (p == P::Z || p == P::Y) a = -a;
  }
  return {a, b};
}

Eigen::Matrix2cd pauli_mat(P p) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  switch (p) {
    case P::I: m << 1, 0, 0, 1; break;
    case P::X: m << 0, 1, 1, 0; break;
    case P::Y: m << 0, -1i, 1i, 0; break;
    case P::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Vector4cd bell_vec(int a, int b) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  if (b == 1) {
    v(0) = 1;
    v(3) = a;
  } else {
    v(1) = 1;
    v(2) = a;
  }
  return v / std::sqrt(2.0);
}

std::int64_t geti(const net::Message& m, std::size_t i) {
  return std::get<std::int64_t>(m.items.at(i));
}

// One held qubit end.
struct End {
  std::uint64_t id = 0;
  std::uint64_t partner = 0;  // partner end id (may lag behind during swaps)
  int partner_node = -1;
  P pauli = P::I;
  bool from_distill = false;
  int pos = 0;            // memory position; 0 is the electron
  std::uint64_t born = 0; // creation order of the originating link
};

struct Request {
  std::uint64_t req_id = 0;
  int from = -1;
  int action = 0;  // 0 entgen, 1 distill
  std::uint64_t keep_end = 0;  // receiver's ends for distill
  std::uint64_t meas_end = 0;
};

struct DmReply {
  int m_bit = 0;
  P keep_pauli = P::I;
  P meas_pauli = P::I;
};

struct Segment {
  int ready = 0;
  bool inserted = true;
  LinkSample sample;
};

struct ChainState;

struct NodeCtx {
  std::unique_ptr<net::Node> node;
  std::unique_ptr<net::QuantumProcessor> proc;
  std::unique_ptr<net::Port> port;

  std::map<std::uint64_t, End> ends;
  // end id consumed by a swap -> the swap's other side as known at swap time
  std::map<std::uint64_t, std::pair<std::uint64_t, int>> tombs;
  std::deque<Request> requests;
  std::set<std::uint64_t> confirms;
  std::map<std::uint64_t, DmReply> dm_box;
  std::set<int> entgen_done;

  End* end_with(std::uint64_t id) {
    auto it = ends.find(id);
    return it == ends.end() ? nullptr : &it->second;
  }
  std::uint64_t end_at_pos(int pos) const {
    for (const auto& [id, e] : ends)
      if (e.pos == pos) return id;
    return 0;
  }
};

class ChainNode;

struct ChainState {
  ChainState(const ChainConfig& c, const NVParams& prm, std::uint64_t seed)
      : rt(seed), cfg(c), params(prm) {}

  net::Runtime rt;
  ChainConfig cfg;
  NVParams params;
  int N = 0;
  int nest_n = 0;  // nested only: N == 2^nest_n + 1
  double seg_km = 0;

  std::vector<NodeCtx> nodes;
  std::vector<Segment> segments;
  std::vector<std::unique_ptr<ChainNode>> protos;

  std::uint64_t end_seq = 0;
  std::uint64_t born_seq = 0;
  std::uint64_t req_seq = 0;
  std::uint64_t upd_landed = 0;

  bool done = false;
  RunRecord rec;

  double delay_ns(int a, int b) const {
    return std::abs(a - b) * seg_km / params.c_fibre_km_per_ns;
  }
  void send(int from, int to, net::Message m) {
    nodes[to].port->post(std::move(m), delay_ns(from, to));
  }

  void segment_ready(int seg);
  void insert_pair(int seg);
  void handle(int idx, net::Message m);
  void check_end();
  void finish();
};

void ChainState::segment_ready(int seg) {
  if (done) return;
  Segment& s = segments[seg];
  if (++s.ready < 2) return;
  s.ready = 0;
  s.sample = sample_link(params, seg_km, rt.quantum.rng);
  rec.attempts += s.sample.k;
  s.inserted = false;
  // Both parties learn of the herald at the same moment; the heralding
  // signal travel is part of the sampled elapsed time.
  net::Message m{"egdone", {static_cast<std::int64_t>(seg)}};
  nodes[seg].port->post(m, s.sample.elapsed_ns);
  nodes[seg + 1].port->post(std::move(m), s.sample.elapsed_ns);
}

void ChainState::insert_pair(int seg) {
  Segment& s = segments[seg];
  if (s.inserted) return;
  s.inserted = true;
  auto qs = api::create_qubits(rt.quantum, 2, cfg.formalism);
  api::assign_dm(rt.quantum, qs, s.sample.rho);
  const std::uint64_t ea = ++end_seq, eb = ++end_seq;
  const std::uint64_t born = ++born_seq;
  for (int side = 0; side < 2; ++side) {
    const int idx = seg + side;
    NodeCtx& n = nodes[idx];
    net::QuantumMemory& mem = n.proc->memory();
    if (mem.occupied(kElectron)) {
      assert(n.end_at_pos(kElectron) == 0 && "electron must be free for generation");
      api::discard(rt.quantum, mem.pop(kElectron));
    }
    mem.put(kElectron, qs[side]);
    if (s.sample.storage_dephase_p > 0) {
      const quant::Channel deph = noise::dephase_channel(s.sample.storage_dephase_p);
      for (int c = 1; c < mem.size(); ++c)
        if (mem.occupied(c)) api::apply_channel(rt.quantum, deph, {mem.access(c)});
    }
    End e;
    e.id = side == 0 ? ea : eb;
    e.partner = side == 0 ? eb : ea;
    e.partner_node = side == 0 ? seg + 1 : seg;
    e.pauli = frame::entgen_correction(s.sample.sign, /*higher_index=*/side == 1);
    e.pos = kElectron;
    e.born = born;
    n.ends[e.id] = e;
  }
  check_end();
}

void ChainState::handle(int idx, net::Message m) {
  NodeCtx& n = nodes[idx];
  if (m.header == "req") {
    n.requests.push_back({static_cast<std::uint64_t>(geti(m, 0)), static_cast<int>(geti(m, 1)),
                          static_cast<int>(geti(m, 2)), static_cast<std::uint64_t>(geti(m, 3)),
                          static_cast<std::uint64_t>(geti(m, 4))});
  } else if (m.header == "cfm") {
    n.confirms.insert(static_cast<std::uint64_t>(geti(m, 0)));
  } else if (m.header == "egdone") {
    const int seg = static_cast<int>(geti(m, 0));
    if (!done) insert_pair(seg);
    n.entgen_done.insert(seg);
  } else if (m.header == "dm") {
    n.dm_box[static_cast<std::uint64_t>(geti(m, 0))] = {
        static_cast<int>(geti(m, 1)), static_cast<P>(geti(m, 2)), static_cast<P>(geti(m, 3))};
  } else if (m.header == "upd") {
    const auto target = static_cast<std::uint64_t>(geti(m, 0));
    const auto new_partner = static_cast<std::uint64_t>(geti(m, 1));
    const int new_node = static_cast<int>(geti(m, 2));
    const P delta = static_cast<P>(geti(m, 3));
    const bool reply = geti(m, 4) != 0;
    if (End* e = n.end_with(target)) {
      e->pauli = frame::mul(e->pauli, delta);
      e->partner = new_partner;
      e->partner_node = new_node;
      if (!reply) {
        e->from_distill = false;
        ++upd_landed;
        // Tell the far side who really holds this half now; its own pointer
        // may still name a consumed end.
        send(idx, new_node,
             {"upd",
              {static_cast<std::int64_t>(new_partner), static_cast<std::int64_t>(e->id),
               static_cast<std::int64_t>(idx), static_cast<std::int64_t>(P::I),
               static_cast<std::int64_t>(1)}});
      }
      check_end();
    } else {
      auto t = n.tombs.find(target);
      if (t == n.tombs.end()) throw net::ConfigError("correction for an unknown qubit end");
      m.items[0] = static_cast<std::int64_t>(t->second.first);
      send(idx, t->second.second, std::move(m));
    }
  } else {
    throw net::ConfigError("unknown chain message '" + m.header + "'");
  }
}

void ChainState::check_end() {
  if (done || upd_landed != 2 * static_cast<std::uint64_t>(rec.swaps)) return;
  for (const auto& [ida, ea] : nodes[0].ends) {
    if (ea.partner_node != N - 1) continue;
    const End* eb = nodes[N - 1].end_with(ea.partner);
    if (eb && eb->partner == ida) {
      finish();
      return;
    }
  }
}

void ChainState::finish() {
  done = true;
  rec.duration_ns = rt.engine.now();
  const End* ea = nullptr;
  for (const auto& [id, e] : nodes[0].ends)
    if (e.partner_node == N - 1) ea = &e;
  const End* eb = nodes[N - 1].end_with(ea->partner);
  const quant::QubitPtr qa = nodes[0].proc->memory().access(ea->pos);
  const quant::QubitPtr qb = nodes[N - 1].proc->memory().access(eb->pos);
  const quant::Mat rho = api::peek_reduced({qa, qb});
  // Undo the storage rotation for carbon-held halves, then the tracked
  // corrections, and compare with the target pair.
  const Eigen::Matrix2cd had = (Eigen::Matrix2cd() << 1, 1, 1, -1).finished() / std::sqrt(2.0);
  Eigen::Matrix2cd ua = pauli_mat(ea->pauli);
  Eigen::Matrix2cd ub = pauli_mat(eb->pauli);
  if (ea->pos != kElectron) ua = ua * had;
  if (eb->pos != kElectron) ub = ub * had;
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) u.block<2, 2>(2 * i, 2 * j) = ua(i, j) * ub;
  const Eigen::Vector4cd ref = bell_vec(1, -1);
  rec.end_fidelity = std::real((ref.adjoint() * u * rho * u.adjoint() * ref)(0, 0));
}

// ---------------------------------------------------------------------------

class ChainNode final : public proto::NodeProtocol {
 public:
  ChainNode(ChainState& st, int idx)
      : NodeProtocol(st.rt, "chain-node-" + std::to_string(idx), *st.nodes[idx].node),
        st_(&st),
        idx_(idx) {}

 protected:
  proto::Task run() override;

 private:
  NodeCtx& me() { return st_->nodes[idx_]; }
  net::QuantumProcessor& proc() { return local(*me().proc); }

  void drain() {
    net::Port& p = *me().port;
    while (p.has_input()) st_->handle(idx_, p.rx());
  }

  // Waits until pred() holds (or the run is over), handling every message.
  template <class Pred>
  Sub until(Pred pred) {
    for (;;) {
      drain();
      if (st_->done || pred()) co_return;
      co_await wait_port(*me().port);
    }
  }

  Sub run_program(net::QuantumProgram prog) {
    last_run_ = proc().execute(prog);
    co_await wait(
        sim::EventExpression::atomic({net::kProgramDone, proc().entity(), last_run_.done}));
  }

  int free_carbon() {
    net::QuantumMemory& mem = proc().memory();
    for (int c = 1; c < mem.size(); ++c)
      if (!mem.occupied(c)) return c;
    throw net::ConfigError("node " + std::to_string(idx_) + " has no free storage position");
  }

  Sub store_end(std::uint64_t id) {
    const int c = free_carbon();
    co_await run_program(store_block(c));
    me().ends.at(id).pos = c;
  }

  Sub retrieve_end(std::uint64_t id) {
    const int c = me().ends.at(id).pos;
    co_await run_program(retrieve_block(c));
    api::discard(rt().quantum, proc().memory().pop(c));  // emptied storage qubit
    me().ends.at(id).pos = kElectron;
  }

  Sub free_electron() {
    if (const std::uint64_t at0 = me().end_at_pos(kElectron)) {
      co_await store_end(at0);
    } else if (proc().memory().occupied(kElectron)) {
      // leftover readout qubit
      api::discard(rt().quantum, proc().memory().pop(kElectron));
    }
  }

  Sub entgen_initiate(int other) {
    if (st_->done) co_return;
    co_await free_electron();
    const std::uint64_t rid = ++st_->req_seq;
    st_->send(idx_, other,
              {"req",
               {static_cast<std::int64_t>(rid), static_cast<std::int64_t>(idx_),
                std::int64_t{0}, std::int64_t{0}, std::int64_t{0}}});
    co_await until([&] { return me().confirms.count(rid) > 0; });
    if (st_->done) co_return;
    me().confirms.erase(rid);
    const int seg = std::min(idx_, other);
    st_->segment_ready(seg);
    co_await until([&] { return me().entgen_done.count(seg) > 0; });
    me().entgen_done.erase(seg);
  }

  Sub entgen_respond(const Request& r) {
    co_await free_electron();
    st_->send(idx_, r.from, {"cfm", {static_cast<std::int64_t>(r.req_id)}});
    co_await wait_timer(st_->delay_ns(idx_, r.from));
    if (st_->done) co_return;
    const int seg = std::min(idx_, r.from);
    st_->segment_ready(seg);
    co_await until([&] { return me().entgen_done.count(seg) > 0; });
    me().entgen_done.erase(seg);
  }

  // Joint distillation body, run symmetrically on both sides once the
  // handshake picked which end to keep and which to consume.
  Sub distill_joint(std::uint64_t keep_id, std::uint64_t meas_id, int remote, bool initiator) {
    NodeCtx& n = me();
    if (!n.end_with(keep_id) || !n.end_with(meas_id)) co_return;
    if (n.ends.at(meas_id).pos != kElectron) {
      const std::uint64_t at0 = n.end_at_pos(kElectron);
      if (at0 != 0 && at0 != meas_id) co_await store_end(at0);
      co_await retrieve_end(meas_id);
    }
    const P myk = n.ends.at(keep_id).pauli;
    const P mym = n.ends.at(meas_id).pauli;
    const P pre = frame::mul(myk, mym);
    if (pre != P::I) {
      net::QuantumProgram fix;
      fix.add(pre == P::X ? "x_e" : pre == P::Y ? "y_e" : "z_e", {kElectron});
      co_await run_program(fix);
    }
    co_await run_program(distill_block(n.ends.at(keep_id).pos));
    const int mbit = last_run_.outcomes.at("m");
    api::discard(rt().quantum, proc().memory().pop(kElectron));
    const std::uint64_t meas_partner = n.ends.at(meas_id).partner;
    const std::uint64_t keep_partner = n.ends.at(keep_id).partner;
    n.ends.erase(meas_id);
    st_->send(idx_, remote,
              {"dm",
               {static_cast<std::int64_t>(keep_partner), static_cast<std::int64_t>(mbit),
                static_cast<std::int64_t>(myk), static_cast<std::int64_t>(mym)}});
    (void)meas_partner;
    co_await until([&] { return me().dm_box.count(keep_id) > 0; });
    if (st_->done && me().dm_box.count(keep_id) == 0) co_return;
    const DmReply reply = me().dm_box.at(keep_id);
    me().dm_box.erase(keep_id);
    const bool adjacent = std::abs(idx_ - remote) == 1;
    const bool success = frame::distill_success(adjacent, mbit, reply.m_bit);
    if (success) {
      End& keep = n.ends.at(keep_id);
      keep.from_distill = true;
      const P low = idx_ < remote ? myk : reply.keep_pauli;
      const P high = idx_ < remote ? reply.keep_pauli : myk;
      keep.pauli = idx_ < remote ? P::I : frame::distill_correction(low, high);
    } else {
      api::discard(rt().quantum, proc().memory().pop(n.ends.at(keep_id).pos));
      n.ends.erase(keep_id);
    }
    if (initiator) {
      const P ka = idx_ < remote ? myk : reply.keep_pauli;
      const P kb = idx_ < remote ? reply.keep_pauli : myk;
      const P ma = idx_ < remote ? mym : reply.meas_pauli;
      const P mb = idx_ < remote ? reply.meas_pauli : mym;
      // Consumed-pair label after the local correction was folded in.
      const int b = bell_label(frame::mul(frame::mul(ka, ma), ma),
                               frame::mul(frame::mul(kb, mb), mb)).second;
      const int d = bell_label(ka, kb).second;
      st_->rec.distills.push_back({mbit, reply.m_bit, b, d, success});
    }
  }

  Sub distill_initiate(int remote) {
    // Two oldest non-distilled pairs with that node; keep the older one.
    NodeCtx& n = me();
    std::vector<const End*> cand;
    for (const auto& [id, e] : n.ends)
      if (e.partner_node == remote && !e.from_distill) cand.push_back(&e);
    std::sort(cand.begin(), cand.end(),
              [](const End* a, const End* b) { return a->born < b->born; });
    const std::uint64_t keep_id = cand[0]->id, meas_id = cand[1]->id;
    const std::uint64_t rid = ++st_->req_seq;
    st_->send(idx_, remote,
              {"req",
               {static_cast<std::int64_t>(rid), static_cast<std::int64_t>(idx_), std::int64_t{1},
                static_cast<std::int64_t>(cand[0]->partner),
                static_cast<std::int64_t>(cand[1]->partner)}});
    co_await until([&] { return me().confirms.count(rid) > 0; });
    if (st_->done) co_return;
    me().confirms.erase(rid);
    co_await distill_joint(keep_id, meas_id, remote, /*initiator=*/true);
  }

  Sub distill_respond(const Request& r) {
    st_->send(idx_, r.from, {"cfm", {static_cast<std::int64_t>(r.req_id)}});
    co_await wait_timer(st_->delay_ns(idx_, r.from));
    co_await distill_joint(r.keep_end, r.meas_end, r.from, /*initiator=*/false);
  }

  Sub do_swap(std::uint64_t left_id, std::uint64_t right_id) {
    NodeCtx& n = me();
    if (n.ends.at(left_id).pos != kElectron && n.ends.at(right_id).pos != kElectron) {
      const std::uint64_t newer =
          n.ends.at(left_id).born > n.ends.at(right_id).born ? left_id : right_id;
      co_await retrieve_end(newer);
    }
    const End left = n.ends.at(left_id);
    const End right = n.ends.at(right_id);
    const int carbon = left.pos == kElectron ? right.pos : left.pos;
    co_await run_program(swap_block(carbon));
    const int m_earlier = 1 - 2 * last_run_.outcomes.at("m_earlier");
    const int m_later = 1 - 2 * last_run_.outcomes.at("m_later");
    const int a = -m_earlier * m_later;
    const int b = m_later;
    const P corr = frame::swap_correction(left.pauli, right.pauli, a, b);
    n.tombs[left.id] = {right.partner, right.partner_node};
    n.tombs[right.id] = {left.partner, left.partner_node};
    n.ends.erase(left_id);
    n.ends.erase(right_id);
    api::discard(rt().quantum, proc().memory().pop(kElectron));
    api::discard(rt().quantum, proc().memory().pop(carbon));
    ++st_->rec.swaps;
    st_->send(idx_, left.partner_node,
              {"upd",
               {static_cast<std::int64_t>(left.partner), static_cast<std::int64_t>(right.partner),
                static_cast<std::int64_t>(right.partner_node), static_cast<std::int64_t>(P::I),
                std::int64_t{0}}});
    st_->send(idx_, right.partner_node,
              {"upd",
               {static_cast<std::int64_t>(right.partner), static_cast<std::int64_t>(left.partner),
                static_cast<std::int64_t>(left.partner_node), static_cast<std::int64_t>(corr),
                std::int64_t{0}}});
  }

  // --- generate-and-swap-immediately roles -------------------------------

  Sub run_swap_asap() {
    const int N = st_->N;
    if ((idx_ + 1) % 2 == 0) {
      // Even 1-based index: request towards the left, then towards the right.
      co_await entgen_initiate(idx_ - 1);
      if (idx_ + 1 < N && !st_->done) {
        co_await store_end(me().end_at_pos(kElectron));
        co_await entgen_initiate(idx_ + 1);
      }
    } else {
      const int expect = (idx_ > 0 ? 1 : 0) + (idx_ + 1 < N ? 1 : 0);
      for (int r = 0; r < expect && !st_->done; ++r) {
        co_await until([&] { return !me().requests.empty(); });
        if (st_->done) break;
        const Request rq = me().requests.front();
        me().requests.pop_front();
        co_await entgen_respond(rq);
      }
    }
    if (idx_ > 0 && idx_ + 1 < N && !st_->done) {
      std::uint64_t left = 0, right = 0;
      for (const auto& [id, e] : me().ends)
        (e.partner_node < idx_ ? left : right) = id;
      co_await do_swap(left, right);
    }
  }

  // --- nested scheme with distillation -----------------------------------

  struct Action {
    enum Kind { None, Swap, Distill, Respond, Entgen } kind = None;
    int remote = -1;
    std::uint64_t a = 0, b = 0;
    Request req;
  };

  Action pick_nested() {
    NodeCtx& n = me();
    const int N = st_->N;
    if (idx_ == 0 || idx_ == N - 1) {
      if (!n.requests.empty()) {
        Action act;
        act.kind = Action::Respond;
        act.req = n.requests.front();
        n.requests.pop_front();
        return act;
      }
      return {};
    }
    const int f = f_span(st_->nest_n, idx_);
    std::uint64_t dl = 0, dr = 0;
    std::vector<const End*> rawl, rawr;
    for (const auto& [id, e] : n.ends) {
      if (e.partner_node == idx_ - f) {
        if (e.from_distill) dl = id;
        else rawl.push_back(&e);
      } else if (e.partner_node == idx_ + f) {
        if (e.from_distill) dr = id;
        else rawr.push_back(&e);
      }
    }
    Action act;
    if (dl && dr) {
      act.kind = Action::Swap;
      act.a = dl;
      act.b = dr;
      return act;
    }
    if (rawl.size() >= 2 || rawr.size() >= 2) {
      act.kind = Action::Distill;
      act.remote = rawl.size() >= 2 ? idx_ - f : idx_ + f;
      return act;
    }
    if (!n.requests.empty()) {
      act.kind = Action::Respond;
      act.req = n.requests.front();
      n.requests.pop_front();
      return act;
    }
    if (f == 1) {
      // Keep regenerating an adjacent link until its distilled pair exists.
      if (!dl && rawl.size() < 2) {
        act.kind = Action::Entgen;
        act.remote = idx_ - 1;
      } else if (!dr && rawr.size() < 2) {
        act.kind = Action::Entgen;
        act.remote = idx_ + 1;
      }
    }
    return act;
  }

  bool has_distilled_with(int other) {
    for (const auto& [id, e] : me().ends)
      if (e.partner_node == other && e.from_distill) return true;
    return false;
  }

  Sub run_nested() {
    while (!st_->done) {
      drain();
      if (st_->done) break;
      const Action act = pick_nested();
      switch (act.kind) {
        case Action::Swap:
          co_await do_swap(act.a, act.b);
          break;
        case Action::Distill:
          co_await distill_initiate(act.remote);
          break;
        case Action::Respond:
          if (act.req.action == 0)
            co_await entgen_respond(act.req);
          else
            co_await distill_respond(act.req);
          break;
        case Action::Entgen:
          co_await entgen_initiate(act.remote);
          break;
        case Action::None:
          co_await wait_port(*me().port);
          break;
      }
    }
  }

  ChainState* st_;
  int idx_;
  net::ProgramRun last_run_;
};

proto::Task ChainNode::run() {
  if (st_->cfg.protocol == ChainProtocol::SwapAsap)
    co_await run_swap_asap();
  else
    co_await run_nested();
  // Keep routing corrections and requests until the run is over.
  while (!st_->done) {
    drain();
    if (st_->done) break;
    co_await wait_port(*me().port);
  }
}

}  // namespace

RunRecord run_chain(const ChainConfig& cfg, const NVParams& params, std::uint64_t seed) {
  params.validate();
  if (cfg.nodes < 2) throw net::ConfigError("a chain needs at least two nodes");
  if (cfg.length_km <= 0) throw net::ConfigError("chain length must be positive");
  int nest_n = 0;
  if (cfg.protocol == ChainProtocol::NestedWithDistill) {
    int span = cfg.nodes - 1;
    while (span > 1 && span % 2 == 0) {
      span /= 2;
      ++nest_n;
    }
    if (span != 1 || cfg.nodes < 3)
      throw net::ConfigError("the nested scheme needs 2^n + 1 nodes");
    nest_n = static_cast<int>(std::round(std::log2(cfg.nodes - 1)));
    // A middle node may hold two distilled pairs per nesting level plus four
    // raw pairs while generating.
    if (cfg.carbons < 2 * nest_n + 4)
      throw net::ConfigError("the nested scheme needs at least 2n + 4 storage positions");
  }
  if (cfg.carbons < 2) throw net::ConfigError("need at least two storage positions");

  ChainState st(cfg, params, seed);
  st.N = cfg.nodes;
  st.nest_n = nest_n;
  st.seg_km = cfg.length_km / (cfg.nodes - 1);
  st.segments.resize(cfg.nodes - 1);
  st.nodes.resize(cfg.nodes);
  for (int i = 0; i < cfg.nodes; ++i) {
    NodeCtx& n = st.nodes[i];
    n.node = std::make_unique<net::Node>(st.rt, "node-" + std::to_string(i), i);
    n.proc.reset(make_nv_processor(st.rt, "nv-" + std::to_string(i), cfg.carbons,
                                   cfg.formalism, params));
    n.proc->set_scope(n.node.get());
    n.node->processor = n.proc.get();
    n.node->memory = &n.proc->memory();
    n.port = std::make_unique<net::Port>(st.rt, "cport-" + std::to_string(i));
  }
  for (int i = 0; i < cfg.nodes; ++i) st.protos.push_back(std::make_unique<ChainNode>(st, i));
  for (auto& p : st.protos) p->start();
  st.rt.engine.run();
  if (!st.done) throw net::ConfigError("chain run stalled before the end nodes connected");
  st.rec.engine_stats = st.rt.engine.stats();
  st.rec.quantum_stats = st.rt.quantum.stats;
  return st.rec;
}

}  // namespace qnet::nv
