/** Browser bootstrap: binds the controller to location.hash and the page.
 *
 * All state lives in the hash, so the browser's own history gives back and
 * forward for free and every view is a shareable link.
 */

import { Controller } from "./controller.js";

interface GuiConfig {
  api_base_url?: string;
}

async function loadConfig(): Promise<GuiConfig> {
  try {
    const response = await fetch("./config.json");
    if (!response.ok) return {};
    return (await response.json()) as GuiConfig;
  } catch {
    return {};
  }
}

function formValue(form: HTMLFormElement, name: string): string {
  const element = form.elements.namedItem(name);
  return element instanceof HTMLInputElement || element instanceof HTMLSelectElement
    ? element.value
    : "";
}

async function main(): Promise<void> {
  const root = document.getElementById("app");
  if (root === null) return;
  const config = await loadConfig();

  const controller = new Controller({
    apiBaseUrl: config.api_base_url ?? "",
    fetchImpl: (url) => fetch(url),
    onRender: (html) => {
      root.innerHTML = html;
    },
    onNavigate: (hash) => {
      if (window.location.hash === hash) {
        void controller.handleHash(hash);
      } else {
        window.location.hash = hash;
      }
    },
  });

  window.addEventListener("hashchange", () => {
    void controller.handleHash(window.location.hash);
  });

  root.addEventListener("submit", (event) => {
    const form = event.target;
    if (!(form instanceof HTMLFormElement)) return;
    const role = form.dataset.role;
    if (role === "add-chip") {
      event.preventDefault();
      controller.addChip(formValue(form, "attribute"), formValue(form, "value"));
    } else if (role === "search") {
      event.preventDefault();
      controller.search(formValue(form, "q"));
    }
  });

  root.addEventListener("change", (event) => {
    const select = event.target;
    if (select instanceof HTMLSelectElement && select.dataset.role === "sort") {
      controller.setSort(select.value);
    }
  });

  root.addEventListener("click", (event) => {
    const target = event.target;
    if (!(target instanceof HTMLAnchorElement)) return;
    if (target.dataset.role === "retry") {
      event.preventDefault();
      controller.retry();
    } else if (target.dataset.role === "next") {
      const hash = target.getAttribute("href") ?? "";
      if (window.location.hash === hash) {
        event.preventDefault();
        void controller.handleHash(hash);
      }
    }
  });

  await controller.handleHash(window.location.hash);
}

void main();
