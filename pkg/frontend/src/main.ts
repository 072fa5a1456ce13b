import { ApiClient } from "./api.js";
import { mountApp } from "./app.js";

const query = new URLSearchParams(window.location.search);
const serviceUrl =
  query.get("service") ?? `http://${window.location.hostname || "127.0.0.1"}:8675`;

mountApp(document.getElementById("app")!, new ApiClient(serviceUrl));
