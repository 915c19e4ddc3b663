// Generated by `scenecast gen-schema`. Do not edit.

export const SCHEMA_HASH = "a9f703089e6af8d2994c0d30afb7360d8fca894b5aaad5c97c7ff72bd0ea2431";

/** First client frame; carries the client's schema hash. */
export interface Hello {
  type: "Hello";
  schema_hash: string;
}

/** Handshake accepted; first message of the first batch. */
export interface Welcome {
  type: "Welcome";
  client_id: number;
  schema_hash: string;
}

/** Handshake refused; the connection closes after this frame. */
export interface Reject {
  type: "Reject";
  reason: string;
  server_hash: string;
  client_hash: string;
}

/** Client acknowledgement of a received batch. */
export interface Ack {
  type: "Ack";
  seq: number;
}

/** Create or replace a frame node. */
export interface SceneAddFrame {
  type: "SceneAddFrame";
  path: string;
  wxyz: [number, number, number, number];
  position: [number, number, number];
  visible: boolean;
  clickable: boolean;
  axes_length: number;
  axes_radius: number;
  show_axes: boolean;
}

/** Create or replace a grid node. */
export interface SceneAddGrid {
  type: "SceneAddGrid";
  path: string;
  wxyz: [number, number, number, number];
  position: [number, number, number];
  visible: boolean;
  clickable: boolean;
  width: number;
  height: number;
  cell_size: number;
  color: [number, number, number];
}

/** Create or replace a point_cloud node. */
export interface SceneAddPointCloud {
  type: "SceneAddPointCloud";
  path: string;
  wxyz: [number, number, number, number];
  position: [number, number, number];
  visible: boolean;
  clickable: boolean;
  positions: Uint8Array;
  colors: Uint8Array;
  point_size: number;
}

/** Create or replace a line_segments node. */
export interface SceneAddLineSegments {
  type: "SceneAddLineSegments";
  path: string;
  wxyz: [number, number, number, number];
  position: [number, number, number];
  visible: boolean;
  clickable: boolean;
  points: Uint8Array;
  colors: Uint8Array;
  line_width: number;
}

/** Create or replace a mesh node. */
export interface SceneAddMesh {
  type: "SceneAddMesh";
  path: string;
  wxyz: [number, number, number, number];
  position: [number, number, number];
  visible: boolean;
  clickable: boolean;
  vertices: Uint8Array;
  faces: Uint8Array;
  color: [number, number, number];
  wireframe: boolean;
}

/** Create or replace a box node. */
export interface SceneAddBox {
  type: "SceneAddBox";
  path: string;
  wxyz: [number, number, number, number];
  position: [number, number, number];
  visible: boolean;
  clickable: boolean;
  dimensions: [number, number, number];
  color: [number, number, number];
  wireframe: boolean;
}

/** Create or replace a icosphere node. */
export interface SceneAddIcosphere {
  type: "SceneAddIcosphere";
  path: string;
  wxyz: [number, number, number, number];
  position: [number, number, number];
  visible: boolean;
  clickable: boolean;
  radius: number;
  subdivisions: number;
  color: [number, number, number];
}

/** Create or replace a camera_frustum node. */
export interface SceneAddCameraFrustum {
  type: "SceneAddCameraFrustum";
  path: string;
  wxyz: [number, number, number, number];
  position: [number, number, number];
  visible: boolean;
  clickable: boolean;
  fov: number;
  aspect: number;
  scale: number;
  color: [number, number, number];
}

/** Create or replace a label node. */
export interface SceneAddLabel {
  type: "SceneAddLabel";
  path: string;
  wxyz: [number, number, number, number];
  position: [number, number, number];
  visible: boolean;
  clickable: boolean;
  text: string;
}

/** Create or replace a image node. */
export interface SceneAddImage {
  type: "SceneAddImage";
  path: string;
  wxyz: [number, number, number, number];
  position: [number, number, number];
  visible: boolean;
  clickable: boolean;
  width: number;
  height: number;
  rgb: Uint8Array;
  render_width: number;
  render_height: number;
}

/** Set one kind-specific node property. */
export interface SceneNodeSetProp {
  type: "SceneNodeSetProp";
  path: string;
  prop: string;
  bool?: boolean;
  int?: number;
  float?: number;
  string?: string;
  bytes?: Uint8Array;
  float32_array?: Uint8Array;
  vec3?: [number, number, number];
  rgb?: [number, number, number];
  strings?: string[];
}

/** Set a node's local pose. */
export interface SceneNodeSetPose {
  type: "SceneNodeSetPose";
  path: string;
  wxyz: [number, number, number, number];
  position: [number, number, number];
}

/** Set a node's own visibility flag. */
export interface SceneNodeSetVisible {
  type: "SceneNodeSetVisible";
  path: string;
  visible: boolean;
}

/** Enable or disable click reporting for a node. */
export interface SceneNodeSetClickable {
  type: "SceneNodeSetClickable";
  path: string;
  clickable: boolean;
}

/** Remove a node and its subtree. */
export interface SceneNodeRemove {
  type: "SceneNodeRemove";
  path: string;
}

/** Client click on a clickable node. */
export interface SceneClick {
  type: "SceneClick";
  path: string;
  ray_origin: [number, number, number];
  ray_direction: [number, number, number];
  screen_pos: [number, number];
}

/** Create a button element. */
export interface GuiAddButton {
  type: "GuiAddButton";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
  color?: [number, number, number];
  value: number;
}

/** Create a checkbox element. */
export interface GuiAddCheckbox {
  type: "GuiAddCheckbox";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
  value: boolean;
}

/** Create a slider element. */
export interface GuiAddSlider {
  type: "GuiAddSlider";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
  min: number;
  max: number;
  step: number;
  value: number;
}

/** Create a number element. */
export interface GuiAddNumber {
  type: "GuiAddNumber";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
  min?: number;
  max?: number;
  step: number;
  value: number;
}

/** Create a text element. */
export interface GuiAddText {
  type: "GuiAddText";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
  value: string;
}

/** Create a dropdown element. */
export interface GuiAddDropdown {
  type: "GuiAddDropdown";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
  options: string[];
  value: string;
}

/** Create a rgb element. */
export interface GuiAddRgb {
  type: "GuiAddRgb";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
  value: [number, number, number];
}

/** Create a vector3 element. */
export interface GuiAddVector3 {
  type: "GuiAddVector3";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
  step: number;
  value: [number, number, number];
}

/** Create a folder element. */
export interface GuiAddFolder {
  type: "GuiAddFolder";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
  expanded: boolean;
}

/** Create a tab_group element. */
export interface GuiAddTabGroup {
  type: "GuiAddTabGroup";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
}

/** Create a tab element. */
export interface GuiAddTab {
  type: "GuiAddTab";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
}

/** Create a markdown element. */
export interface GuiAddMarkdown {
  type: "GuiAddMarkdown";
  uid: number;
  container_uid: number;
  order: number;
  label: string;
  disabled: boolean;
  visible: boolean;
  content: string;
}

/** Set one element property. */
export interface GuiSetProp {
  type: "GuiSetProp";
  uid: number;
  prop: string;
  bool?: boolean;
  int?: number;
  float?: number;
  string?: string;
  bytes?: Uint8Array;
  float32_array?: Uint8Array;
  vec3?: [number, number, number];
  rgb?: [number, number, number];
  strings?: string[];
}

/** Server-side value write. */
export interface GuiSetValue {
  type: "GuiSetValue";
  uid: number;
  bool?: boolean;
  int?: number;
  float?: number;
  string?: string;
  bytes?: Uint8Array;
  float32_array?: Uint8Array;
  vec3?: [number, number, number];
  rgb?: [number, number, number];
  strings?: string[];
}

/** Remove an element; `uids` lists it and everything it contained. */
export interface GuiRemove {
  type: "GuiRemove";
  uid: number;
  uids: number[];
}

/** Client-side value change or button click. */
export interface GuiUpdate {
  type: "GuiUpdate";
  uid: number;
  bool?: boolean;
  int?: number;
  float?: number;
  string?: string;
  bytes?: Uint8Array;
  float32_array?: Uint8Array;
  vec3?: [number, number, number];
  rgb?: [number, number, number];
  strings?: string[];
}

/** Move one client's camera. */
export interface CameraSet {
  type: "CameraSet";
  wxyz: [number, number, number, number];
  position: [number, number, number];
  fov: number;
  aspect: number;
  look_at: [number, number, number];
}

/** Client camera state, throttled. */
export interface CameraReport {
  type: "CameraReport";
  wxyz: [number, number, number, number];
  position: [number, number, number];
  fov: number;
  aspect: number;
  look_at: [number, number, number];
}

export type Message =
  | Hello
  | Welcome
  | Reject
  | Ack
  | SceneAddFrame
  | SceneAddGrid
  | SceneAddPointCloud
  | SceneAddLineSegments
  | SceneAddMesh
  | SceneAddBox
  | SceneAddIcosphere
  | SceneAddCameraFrustum
  | SceneAddLabel
  | SceneAddImage
  | SceneNodeSetProp
  | SceneNodeSetPose
  | SceneNodeSetVisible
  | SceneNodeSetClickable
  | SceneNodeRemove
  | SceneClick
  | GuiAddButton
  | GuiAddCheckbox
  | GuiAddSlider
  | GuiAddNumber
  | GuiAddText
  | GuiAddDropdown
  | GuiAddRgb
  | GuiAddVector3
  | GuiAddFolder
  | GuiAddTabGroup
  | GuiAddTab
  | GuiAddMarkdown
  | GuiSetProp
  | GuiSetValue
  | GuiRemove
  | GuiUpdate
  | CameraSet
  | CameraReport;
