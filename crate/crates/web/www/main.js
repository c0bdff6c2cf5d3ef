import init, { howell, solve, verify } from "./pkg/jordanlab_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(out, f) {
  const el = $(out);
  el.classList.remove("err");
  el.textContent = "working...";
  // let the browser paint before the (synchronous) computation
  setTimeout(() => {
    try {
      el.textContent = JSON.stringify(JSON.parse(f()), null, 2);
    } catch (e) {
      el.classList.add("err");
      el.textContent = String(e);
    }
  }, 0);
}

await init();

$("h-run").onclick = () => show("h-out", () => howell(num("h-m"), $("h-rows").value));
$("s-run").onclick = () =>
  show("s-out", () =>
    solve($("s-kind").value, $("s-base").value, num("s-m"), num("s-n"), $("s-t").checked, $("s-pairs").value));
$("v-run").onclick = () =>
  show("v-out", () =>
    verify($("v-id").value, $("v-base").value, num("v-m"), num("v-n"), $("v-pairs").value, $("v-corrupt").checked));
