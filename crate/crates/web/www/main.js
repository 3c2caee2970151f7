import init, { coupling_scan, detuning_scan, blockade_lines } from "./pkg/blockade_web.js";

const num = (form, name) => Number(form.querySelector(`[name=${name}]`).value);

// Log-scale plot of several series sharing an x axis; NaN breaks a line.
function plot(canvas, xs, series, markers) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 44;
  ctx.clearRect(0, 0, w, h);
  const ys = series.flatMap(s => s.ys).filter(y => y > 0 && Number.isFinite(y));
  if (ys.length === 0) return;
  const lo = Math.floor(Math.log10(Math.min(...ys))), hi = Math.ceil(Math.log10(Math.max(...ys)));
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const px = x => pad + (x - x0) / (x1 - x0) * (w - 2 * pad);
  const py = y => h - pad - (Math.log10(y) - lo) / Math.max(hi - lo, 1) * (h - 2 * pad);

  ctx.strokeStyle = "#ccc";
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  for (let e = lo; e <= hi; e++) {
    ctx.beginPath(); ctx.moveTo(pad, py(10 ** e)); ctx.lineTo(w - pad, py(10 ** e)); ctx.stroke();
    ctx.fillText(`1e${e}`, 4, py(10 ** e) + 4);
  }
  for (let k = 0; k <= 4; k++) {
    const x = x0 + (x1 - x0) * k / 4;
    ctx.fillText(x.toFixed(2), px(x) - 10, h - pad + 16);
  }
  for (const m of markers) {
    if (m < Math.min(x0, x1) || m > Math.max(x0, x1)) continue;
    ctx.strokeStyle = "#999";
    ctx.setLineDash([4, 4]);
    ctx.beginPath(); ctx.moveTo(px(m), pad); ctx.lineTo(px(m), h - pad); ctx.stroke();
    ctx.setLineDash([]);
  }
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    let pen = false;
    xs.forEach((x, i) => {
      const y = s.ys[i];
      if (!(y > 0 && Number.isFinite(y))) { pen = false; return; }
      pen ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y));
      pen = true;
    });
    ctx.stroke();
  }
}

function columns(flat, width) {
  const cols = Array.from({ length: width }, () => []);
  flat.forEach((v, i) => cols[i % width].push(v));
  return cols;
}

// Lets the status line repaint before the blocking computation starts.
const later = () => new Promise(r => setTimeout(r, 20));

async function runCoupling(form) {
  const status = form.querySelector(".status");
  status.textContent = "solving...";
  await later();
  const t = performance.now();
  const gamma = num(form, "gamma"), eta = num(form, "eta");
  const atoms = num(form, "atoms"), atomDrive = form.querySelector("[name=drive]").value === "atom";
  const [g, me, approx] = columns(coupling_scan(atoms, atomDrive, gamma, eta, num(form, "gmin"), num(form, "gmax"), num(form, "points")), 3);
  const optimum = blockade_lines(1, 1, gamma, eta)[2];
  plot(form.querySelector("canvas"), g, [{ ys: me, color: "#1f5fbf" }, { ys: approx, color: "#d2691e" }], [optimum]);
  const best = me.reduce((b, v, i) => (v < me[b] ? i : b), 0);
  status.textContent = `minimum g2 = ${me[best].toExponential(3)} at g = ${g[best].toFixed(4)}; optimal g = ${optimum.toFixed(4)}; ${(performance.now() - t).toFixed(0)} ms`;
}

async function runDetuning(form) {
  const status = form.querySelector(".status");
  status.textContent = "solving...";
  await later();
  const t = performance.now();
  const g = num(form, "g"), dc = num(form, "dc");
  const [da, me, pop, approx] = columns(detuning_scan(g, dc, num(form, "gamma"), num(form, "eta"), num(form, "dmin"), num(form, "dmax"), num(form, "points")), 4);
  const [conventional, interference] = blockade_lines(g, dc, 1, 0);
  // Populations are tiny at weak drive; bring them onto the g2 decades.
  const scale = Math.max(...me.filter(Number.isFinite)) / Math.max(...pop.filter(Number.isFinite));
  plot(form.querySelector("canvas"), da, [
    { ys: me, color: "#1f5fbf" },
    { ys: pop.map(p => p * scale), color: "#2e8b57" },
    { ys: approx, color: "#d2691e" },
  ], [conventional, interference]);
  status.textContent = `conventional line at ${conventional.toFixed(3)}, interference line at ${interference.toFixed(3)}; ${(performance.now() - t).toFixed(0)} ms`;
}

function wire(id, run) {
  const form = document.getElementById(id);
  form.querySelector("button").addEventListener("click", () =>
    run(form).catch(e => { form.querySelector(".status").textContent = `error: ${e.message ?? e}`; }));
}

await init();
wire("coupling", runCoupling);
wire("detuning", runDetuning);
