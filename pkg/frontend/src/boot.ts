/** Browser entry point: mount the app on the served page. */

import { ApiClient } from "./api.js";
import { App } from "./app.js";

const app = new App(document, new ApiClient(""), window);
app.boot().catch((err) => {
  const banner = document.querySelector("#banner");
  if (banner) {
    banner.textContent = `failed to start: ${err instanceof Error ? err.message : err}`;
    banner.removeAttribute("hidden");
  }
});
