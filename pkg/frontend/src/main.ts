/**
 * Browser entry point: attaches the app to the page skeleton, joins the first
 * available server session (the serve command preloads one), and wires the
 * control strip to app methods.
 */

import { ApiClient, type Space } from "./api.js";
import { mountApp } from "./app.js";
import type { TemplateKind } from "./sketch.js";

function setStatus(text: string): void {
  const el = document.getElementById("status-line");
  if (el) el.textContent = text;
}

async function bootstrap(): Promise<void> {
  const api = new ApiClient();
  const app = mountApp(api);

  const sessions = await api.listSessions();
  const sid = Object.keys(sessions)[0];
  if (!sid) {
    setStatus("no session on server; start the serve command with a corpus");
    return;
  }
  await app.openSession(sid);

  const status = await api.status(sid);
  if (!status.artifacts.embedding) {
    setStatus("training embedding...");
    await api.embed(sid, {});
    await api.waitIdle(sid);
  }
  if (!status.artifacts.fusion) {
    await api.fuse(sid, {});
  }
  await app.initAttributePanel();
  if (!(await api.status(sid)).artifacts.projection) {
    setStatus("projecting...");
    await api.project(sid, { space: "fused" });
    await api.waitIdle(sid);
  }
  await app.loadProjection();
  setStatus("ready");

  const spaceSelect = document.getElementById("space-select") as HTMLSelectElement;
  spaceSelect.addEventListener("change", () => {
    void app.reproject(spaceSelect.value as Space).then(() => setStatus("ready"));
    setStatus("projecting...");
  });

  const kInput = document.getElementById("k-input") as HTMLInputElement;
  kInput.addEventListener("change", () => app.setMatchParams({ k: Number(kInput.value) }));

  const matchButton = document.getElementById("match-button") as HTMLButtonElement;
  matchButton.addEventListener("click", () => {
    setStatus("matching...");
    void app
      .runMatch()
      .then(() => setStatus("ready"))
      .catch((err: Error) => setStatus(`match failed: ${err.message}`));
  });

  const templateSelect = document.getElementById("template-select") as HTMLSelectElement;
  const templateSize = document.getElementById("template-size") as HTMLInputElement;
  const templateButton = document.getElementById("template-button") as HTMLButtonElement;
  templateButton.addEventListener("click", () => {
    app.loadTemplate(templateSelect.value as TemplateKind, Number(templateSize.value));
  });

  const tableToggle = document.getElementById("table-toggle") as HTMLInputElement;
  tableToggle.addEventListener("change", () => app.toggleTable(tableToggle.checked));
}

void bootstrap().catch((err: Error) => setStatus(`startup failed: ${err.message}`));
