// Expects the wasm-bindgen output (--target web) in ./pkg/.
import init, { statistic_table, distribution, reduce } from "./pkg/shuffle_compat_demo.js";

const $ = (id) => document.getElementById(id);

function guarded(errorId, fn) {
  return (event) => {
    event.preventDefault();
    $(errorId).textContent = "";
    try {
      fn();
    } catch (e) {
      $(errorId).textContent = String(e);
    }
  };
}

function clear(node) {
  while (node.firstChild) node.removeChild(node.firstChild);
}

function showTable() {
  const data = JSON.parse(statistic_table($("table-perm").value));
  const table = $("table-out");
  clear(table);
  for (const row of data.rows) {
    const tr = table.insertRow();
    tr.insertCell().textContent = row.name;
    tr.insertCell().textContent = row.value;
  }
}

const SVG = "http://www.w3.org/2000/svg";

function svgEl(name, attrs, text) {
  const el = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  if (text !== undefined) el.textContent = text;
  return el;
}

function drawBars(svg, bars) {
  clear(svg);
  const width = Number(svg.getAttribute("width"));
  const height = Number(svg.getAttribute("height"));
  const top = 16, bottom = 40;
  const max = Math.max(1, ...bars.map((b) => b.count));
  const slot = width / Math.max(1, bars.length);
  bars.forEach((b, i) => {
    const h = ((height - top - bottom) * b.count) / max;
    const x = i * slot + slot * 0.15;
    const y = height - bottom - h;
    svg.appendChild(svgEl("rect", { x, y, width: slot * 0.7, height: h }));
    svg.appendChild(svgEl("text", { x: x + slot * 0.35, y: y - 3, "text-anchor": "middle" }, b.count));
    svg.appendChild(
      svgEl("text", { x: x + slot * 0.35, y: height - bottom + 14, "text-anchor": "middle" }, b.value),
    );
  });
}

function showDistribution() {
  const data = JSON.parse(distribution($("dist-stat").value, $("dist-pi").value, $("dist-sigma").value));
  $("dist-text").textContent = `${data.total} shuffles: ${data.text}`;
  drawBars($("dist-chart"), data.bars);
  const list = $("dist-list");
  clear(list);
  for (const s of data.shuffles) {
    const li = document.createElement("li");
    li.textContent = `${s.shuffle}   ${data.statistic} = ${s.value}`;
    list.appendChild(li);
  }
}

function showReduction() {
  const data = JSON.parse(reduce($("reduce-stat").value, $("reduce-pi").value, $("reduce-sigma").value));
  const list = $("reduce-steps");
  clear(list);
  for (const s of data.steps) {
    const li = document.createElement("li");
    li.textContent = `${s.kind}: ${s.source} -> ${s.target}  (measure ${s.measure_after})`;
    list.appendChild(li);
  }
  $("reduce-result").textContent =
    `${data.steps.length} steps (${data.normalization_steps} normalizing), canonical pair ${data.canonical}`;
}

await init();
$("table-form").addEventListener("submit", guarded("table-error", showTable));
$("dist-form").addEventListener("submit", guarded("dist-error", showDistribution));
$("reduce-form").addEventListener("submit", guarded("reduce-error", showReduction));
showTable();
showDistribution();
showReduction();
